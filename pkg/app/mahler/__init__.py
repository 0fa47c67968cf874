"""
Mahler equations: checking, reductions and coefficient propagation
"""
