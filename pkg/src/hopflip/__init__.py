"""Hopf fibrations, Hopf invariants and Lipschitz constants, computed numerically."""

__version__ = "0.1.0"
