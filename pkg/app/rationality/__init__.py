"""Rationality certificates, the p-adic lattice endgame and valuation obstructions"""
