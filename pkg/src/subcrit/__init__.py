"""Subcritical graph classes: constants, samplers and CRT limit checks."""
