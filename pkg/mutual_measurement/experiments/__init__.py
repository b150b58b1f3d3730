"""
:Description: Module that parses declarative experiment files, runs the named experiments and writes their CSV time
    series and JSON summaries.
"""
