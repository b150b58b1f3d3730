"""
:Description: Module that contains utilities for the `mms` CLI tools.
"""
