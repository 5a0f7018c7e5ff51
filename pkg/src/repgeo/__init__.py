"""Exact computations in the universal algebraic geometry of Lie algebra
representations: free two-sorted representations over identity-defined
classes, certified congruence closures, and the twist systems measuring the
gap between geometric and automorphic equivalence."""

__version__ = "0.1.0"
