"""
Exact linear algebra
"""
