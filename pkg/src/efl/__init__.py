"""Epistemic logic of friendship: tree sequent proof search, countermodels and Hilbert proofs."""

__version__ = "0.1.0"
