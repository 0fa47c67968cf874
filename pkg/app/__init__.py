"""
Hahn-Mahler toolkit: exact truncated Hahn series and Mahler functional equations
"""
__version__ = "1.0.0"
