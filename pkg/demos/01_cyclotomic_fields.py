"""
Exact arithmetic in cyclotomic fields
=====================================

Every number in this package lives in some Q(zeta_M) and is stored exactly.
This walk-through builds a few elements, looks at the fields they generate
and checks how primes split in those fields.
"""

from exotic_hecke.cyclo import Subfield, fixing_group, min_poly, named_surd, splits_completely, zeta

# zeta_3 * zeta_4 is a primitive 12th root of unity; the product is computed
# in Q(zeta_12) and comes back in canonical form
z = zeta(3) * zeta(4)
print("zeta_3 * zeta_4 =", z, "  equals zeta_12^7:", z == zeta(12, 7))

# square roots of small integers are Gauss sums, so they are cyclotomic too
s5 = named_surd("sqrt5")
print("sqrt5^2 =", s5 * s5)

# a field is described by the subgroup of (Z/M)^x fixing it
F = fixing_group([s5])
print("Q(sqrt5):", F, "->", F.describe())
print("minimal polynomial (ascending):", min_poly(F))

# joins and containment follow the Galois correspondence
K = Subfield.cyclotomic(4).join(F)
print("Q(i, sqrt5) =", K.describe(), "of degree", K.degree)
print("Q(sqrt5) inside Q(zeta_20):", F.issubfield(Subfield.cyclotomic(20)))

# an abelian field is pinned down by the primes that split completely in it
print("primes below 100 splitting in Q(sqrt5):",
      [q for q in (2, 3, 7, 11, 13, 19, 29, 31, 41, 59, 61, 71, 79, 89) if splits_completely(F, q)])
