"""
:Description: General utilities that have no other sensible home and are used by the other modules.
"""
