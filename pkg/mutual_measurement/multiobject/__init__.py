"""
:Description: Module that checks the velocity-fluctuation bookkeeping of a body split into two mutually measuring
    halves against the unsplit body.
"""
