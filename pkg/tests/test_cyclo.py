from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from _strategies import (
    MODULI, SMALL_MODULI, PRIMES_1000, check_antitone, check_canonical, check_splitting, elements, raw_polys,
    subgroups,
)
from exotic_hecke.cyclo import (
    CycElt, Subfield, arith, cyclotomic_poly, euler_phi, fixing_group, min_poly, named_surd, reduce_poly,
    splits_completely, zeta,
)


# -- worked examples -----------------------------------------------------------


def test_reduce_examples():
    assert reduce_poly(4, [0, 0, 1]) == CycElt.rational(-1, 4)
    assert reduce_poly(3, [1, 1, 1]).is_zero()
    assert reduce_poly(8, {4: 1}) == CycElt.rational(-1)
    assert reduce_poly(5, [0, 0, 0, 0, 0, 1]) == CycElt.rational(1)


def test_mixed_moduli_product():
    assert zeta(3) * zeta(4) == zeta(12, 7)
    assert (zeta(3) * zeta(4)).modulus == 12


def test_surds_square_correctly():
    assert named_surd("sqrt5") ** 2 == 5
    assert named_surd("sqrt2") ** 2 == 2
    assert named_surd("sqrtm2") ** 2 == -2
    assert named_surd("sqrtm1") ** 2 == -1
    with pytest.raises(ValueError):
        named_surd("sqrt7")


def test_inverse_and_division():
    a = 1 + zeta(5) + 3 * zeta(5, 2)
    assert a * a.inverse() == 1
    assert arith(a, a, "div") == 1
    with pytest.raises(ZeroDivisionError):
        CycElt(7).inverse()
    with pytest.raises(ValueError):
        arith(a, a, "pow")


def test_cyclotomic_polys():
    assert cyclotomic_poly(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_poly(1) == (-1, 1)


def test_min_poly_examples():
    # the golden-ratio field: x^2 + x - 1 in ascending order
    assert min_poly(Subfield.quadratic(5)) == (-1, 1, 1)
    assert min_poly(Subfield.cyclotomic(8)) == (1, 0, 0, 0, 1)
    assert min_poly(Subfield.rationals()) == (-1, 1)


def test_fixing_group_examples():
    F = fixing_group([named_surd("sqrtm2")])
    assert F == Subfield.quadratic(-8)
    assert F.degree == 2 and F.conductor == 8
    assert fixing_group([zeta(3), zeta(4)]) == Subfield.cyclotomic(12)
    assert fixing_group([CycElt.rational(7, 9)]) == Subfield.rationals()


def test_subfield_lattice():
    Q12 = Subfield.cyclotomic(12)
    Q3 = Subfield.cyclotomic(3)
    Qi = Subfield.cyclotomic(4)
    assert Q3.issubfield(Q12) and not Q12.issubfield(Q3)
    assert Q3.join(Qi) == Q12
    assert Q3.meet(Qi) == Subfield.rationals()
    assert Subfield.quadratic(-3) == Q3


def test_subfield_validation():
    with pytest.raises(ValueError):
        Subfield(8, [3])  # lacks 1
    with pytest.raises(ValueError):
        Subfield(8, [1, 3, 5])  # not closed
    with pytest.raises(ValueError):
        Subfield(8, [1, 2])


@pytest.mark.parametrize("F, name", [
    (Subfield.rationals(), "Q"),
    (Subfield.cyclotomic(12), "Q(zeta_12)"),
    (Subfield.quadratic(-8), "Q(sqrt(-2))"),
    (Subfield.quadratic(5), "Q(sqrt(5))"),
    (Subfield.cyclotomic(3).join(Subfield.quadratic(-8)), "Q(zeta_3, sqrt(-2))"),
])
def test_describe(F, name):
    assert F.describe() == name


def test_splits_completely_examples():
    Q5 = Subfield.quadratic(5)
    assert splits_completely(Q5, 11) and not splits_completely(Q5, 7)
    with pytest.raises(ValueError):
        splits_completely(Q5, 5)


def test_json_roundtrip():
    a = Fraction(1, 3) + zeta(20, 7)
    assert CycElt.from_json(a.to_json()) == a
    F = Subfield.quadratic(-8)
    assert Subfield.from_json(F.to_json()) == F


# -- properties ---------------------------------------------------------------


@given(st.data())
def test_canonical_form(data):
    M = data.draw(st.sampled_from(MODULI))
    check_canonical(M, data.draw(raw_polys(M)), data.draw(raw_polys(M)))


@given(elements(), elements(), elements())
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == 0
    if not b.is_zero():
        assert (a / b) * b == a


@given(elements(), st.integers(1, 200))
def test_conjugation_is_a_ring_map(a, t):
    from math import gcd
    M = a.modulus
    if gcd(t, M) != 1:
        t = 1
    b = a + 1
    assert (a * b).conjugate(t) == a.conjugate(t) * b.conjugate(t)


@given(st.data())
def test_galois_antitone(data):
    M = data.draw(st.sampled_from(SMALL_MODULI))
    S = data.draw(st.lists(elements([M]), max_size=2))
    T = data.draw(st.lists(elements([M]), min_size=1, max_size=2))
    check_antitone(M, S, T)


@given(subgroups(), st.sampled_from(PRIMES_1000))
def test_splitting_law(MH, q):
    check_splitting(*MH, q)


@given(subgroups())
@settings(max_examples=40)
def test_min_poly_degree_and_integrality(MH):
    M, H = MH
    F = Subfield(M, H)
    poly = min_poly(F)
    assert len(poly) - 1 == F.degree == euler_phi(M) // len(H)
    assert poly[-1] == 1
