"""
:Description: Module that provides the included `mms` command line interface (CLI) tools.
"""
