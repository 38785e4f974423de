"""Exact scalars: Fraction rationals, QuadExt for Q(sqrt p), UniPoly,
Sturm-based root isolation, factorization over Z and AlgebraicReal."""
