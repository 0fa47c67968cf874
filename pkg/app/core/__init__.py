"""
Exponent arithmetic, scales and valuations
"""
