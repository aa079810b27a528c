"""Invariant inference for propositional transition systems via the monotone theory."""

__version__ = "0.1.0"
