"""
:Description: Module that evolves the velocity distribution under the Doppler-modulated diffusion equation, both with a
    conservative finite-volume Fokker-Planck solver and with an equivalent Monte Carlo ensemble.
"""
