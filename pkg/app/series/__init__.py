"""
Truncated Hahn series and fractional-exponent polynomials
"""
