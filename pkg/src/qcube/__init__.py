"""Numerical checks of variance, influence and gradient inequalities for operators on n qubits."""

__version__ = "0.1.0"
