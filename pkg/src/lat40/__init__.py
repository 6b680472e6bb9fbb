"""Exact-arithmetic lattice toolkit for a 40-dimensional extremal even
unimodular lattice built from a pair of length-20 quadratic residue codes.

All linear algebra is exact (Python integers and fractions).  Floating
point appears only in bound-checked hot loops where every intermediate
value is provably below 2**53.
"""

__version__ = "1.0.0"
