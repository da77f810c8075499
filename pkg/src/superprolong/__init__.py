"""Prolongation towers, finite type and admissibility for Lie superalgebras,
with Grassmann-polynomial calculus on real superdomains."""

__version__ = "0.1.0"
