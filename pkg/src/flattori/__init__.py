"""Exact-arithmetic toolkit for flat complex tori: lattice criteria for
isomorphism / mirror / derived equivalence, T-duality, cohomology transport,
and coisotropic brane checks."""

__version__ = "0.1.0"
