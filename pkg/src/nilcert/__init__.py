"""Exact Lie algebra cohomology and certified algebraic periods for
Riemannian foliations built from nilpotent lattices.

Modules: exact (rationals, Q(sqrt p), polynomials, real algebraic numbers),
linalg, liealg, cohomology, nilgroup, certify, foliation, randalg
(random test families), serialize and cli.
"""

__version__ = "0.1.0"
