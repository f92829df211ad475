"""Exact constructions and checks for the dihedral BMW-type algebras, their
Lawrence-Krammer type representations, and presentations for general Coxeter matrices."""

__version__ = "0.1.0"
