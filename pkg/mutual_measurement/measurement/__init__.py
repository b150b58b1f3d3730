"""
:Description: Module that models a single mutual measurement as a four-state density-matrix pipeline: entangle,
    decohere, then sample a collapsed branch.
"""
