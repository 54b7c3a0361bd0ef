"""Exactly and quasi-exactly solvable Schroedinger models from a prepotential."""

__version__ = "0.1.0"
