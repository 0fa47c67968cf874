"""Utilities module"""



