"""Base combination: equations in alpha^n beta^m from an alpha- and a beta-equation, and equation guessing"""
