"""
:Description: Module that provides physical constants, unit conventions and Planck-scale derived quantities.
"""
