"""Zero-sum sequences, separating atoms and monomial separating sets of finite abelian groups."""

__version__ = "0.1.0"
