"""Exact computations for the queer Lie superalgebra q(n), its quantum group and Schur quotients."""

__version__ = "0.1.0"
