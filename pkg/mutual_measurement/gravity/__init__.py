"""
:Description: Module that implements the closed-form parameter chain from measurement resolution to Newtonian
    acceleration, the momentum-conserving split of the relative acceleration and the consistency estimates.
"""
