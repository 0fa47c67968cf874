"""Seeded instance generators for tests, acceptance runs and the sample command"""
