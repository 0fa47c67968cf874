"""
Support classes and decomposition of series by class
"""
