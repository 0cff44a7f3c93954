"""Regenerate the bundled newform fixtures under src/exotic_hecke/data/.

Records
-------
derived.283
    The S4 form of prime level 283 with the quadratic nebentypus.  Its
    projective representation cuts out the splitting field of x^4 - x - 1
    (discriminant -283), so the projective Frobenius class at p is read off
    the factorisation pattern of that quartic mod p.  Only the class is
    determined this way, not the sign of the lift: a_p is stored as 2, 1, 0
    or sqrt(-2) (identity, 3-cycle, involution, 4-cycle).  c_p, chi and the
    Hecke field are all insensitive to that sign.
derived.283.twist{5,7,17}
    a_q(f) = psi(q) a_q(g) for psi of order 4 mod 5, 3 mod 7 and 8 mod 17;
    the nebentypus becomes chi psi^2 on modulus 283 * l^2.
synthetic.A4.7, synthetic.A5.11, synthetic.A5.3
    Frobenius drawn from a seeded RNG in the binary tetrahedral or
    icosahedral model, scaled by lambda = sqrt(chi(q)) so that det = chi.
synthetic.dihedral.23
    Negative control with projective rotations of order 12.
derived.283.corrupted (separate file)
    derived.283 with one a_p = 0 replaced by sqrt(2).

Reference field polynomials come from sympy's minimal_polynomial, not from
this package.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

import sympy
from sympy import I, Symbol, minimal_polynomial, sqrt
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_from_int_poly

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from exotic_hecke.cyclo import CycElt, lcm, named_surd, zeta  # noqa: E402
from exotic_hecke.dirichlet import ConreyChar  # noqa: E402
from exotic_hecke.exotic_groups import build_group  # noqa: E402

DATA = ROOT / "src" / "exotic_hecke" / "data"
PRIME_BOUND = 600
x = Symbol("x")


def ascending(expr) -> list[int]:
    return [int(c) for c in reversed(sympy.Poly(expr, x).all_coeffs())]


def primes_coprime(N: int, bound: int = PRIME_BOUND) -> list[int]:
    return [p for p in sympy.primerange(2, bound) if N % p]


def char_with(modulus: int, order: int, parity: int | None = None) -> ConreyChar:
    for n in range(1, modulus):
        try:
            chi = ConreyChar(modulus, n)
        except ValueError:
            continue
        if chi.order == order and (parity is None or chi.parity == parity):
            return chi
    raise ValueError(f"no character of order {order} mod {modulus}")


def lift_product(chi: ConreyChar, psi2: ConreyChar, modulus: int) -> ConreyChar:
    """The Conrey character mod ``modulus`` equal to chi * psi2 on units."""
    target = lambda m: (chi.exponent(m) + psi2.exponent(m)) % 1  # noqa: E731
    probes = [m for m in range(2, modulus) if sympy.gcd(m, modulus) == 1][:200]
    for n in range(1, modulus):
        if sympy.gcd(n, modulus) != 1:
            continue
        cand = ConreyChar(modulus, n)
        if all(cand.exponent(m) == target(m) for m in probes):
            if all(cand.exponent(m) == target(m) for m in range(1, modulus) if sympy.gcd(m, modulus) == 1):
                return cand
    raise ValueError("no matching Conrey index")


def record(label, level, chi, ambient, ap, field_poly=None, note=None) -> dict:
    out = {"label": label, "level": level, "char": chi.to_json(), "ambient": ambient,
           "ap": {str(p): a.embed(ambient).to_json() for p, a in sorted(ap.items())}}
    if field_poly is not None:
        out["field_poly"] = field_poly
    if note:
        out["note"] = note
    return out


def frob_283(p: int) -> int:
    """Projective order of Frob_p from the factorisation of x^4 - x - 1 mod p."""
    _, facs = gf_factor(gf_from_int_poly([1, 0, 0, -1, -1], p), p, ZZ)
    degs = sorted((len(f) - 1 for f, e in facs for _ in range(e)), reverse=True)
    return {(1, 1, 1, 1): 1, (2, 1, 1): 2, (2, 2): 2, (3, 1): 3, (4,): 4}[tuple(degs)], degs


def make_283():
    chi = ConreyChar(283, 282)
    assert chi.order == 2 and chi.parity == -1
    ap = {}
    sqrtm2 = named_surd("sqrtm2")
    for p in primes_coprime(283):
        n, degs = frob_283(p)
        # the sign of the permutation is the Legendre symbol (p / 283)
        perm_sign = (-1) ** sum(d - 1 for d in degs)
        assert perm_sign == (1 if chi.exponent(p) == 0 else -1), p
        ap[p] = {1: CycElt.rational(2, 8), 2: CycElt.rational(0, 8), 3: CycElt.rational(1, 8), 4: sqrtm2}[n]
    return chi, ap


def make_twist(chi, ap, ell, k, field_poly):
    psi = char_with(ell, k)
    N = 283 * ell * ell
    psi2_big = ConreyChar(ell * ell, next(n for n in range(1, ell * ell)
                                          if sympy.gcd(n, ell) == 1
                                          and all(ConreyChar(ell * ell, n).exponent(m) == 2 * psi.exponent(m) % 1
                                                  for m in range(1, ell * ell) if m % ell)))
    chi_f = lift_product(chi, psi2_big, N)
    M = lcm(8, k)
    new = {}
    for p, a in ap.items():
        if p == ell:
            continue
        new[p] = (a * zeta(k, int(psi.exponent(p) * k))).embed(M)
    return record(f"derived.283.twist{ell}", N, chi_f, M, new, field_poly,
                  f"twist of derived.283 by a character of order {k} mod {ell}")


def synthetic(label, kind, chi, ambient, seed, field_poly):
    G = build_group(kind)
    rng = random.Random(seed)
    D = chi.order
    ap = {}
    for p in primes_coprime(chi.modulus):
        g = rng.choice(G.elements)
        lam = zeta(2 * D, int(chi.exponent(p) * D))
        ap[p] = (lam * g.trace()).embed(ambient)
    return record(label, chi.modulus, chi, ambient, ap, field_poly,
                  f"synthetic: seeded Frobenius in the {kind} model scaled by sqrt(chi)")


def dihedral(seed):
    chi = ConreyChar(23, 22)
    assert chi.parity == -1
    rng = random.Random(seed)
    ap = {}
    for p in primes_coprime(23):
        lam = zeta(4, int(chi.exponent(p) * 2))
        if rng.random() < 0.5:
            ap[p] = CycElt.rational(0, 24)
        else:
            k = rng.randrange(24)
            ap[p] = lam * (zeta(24, k) + zeta(24, -k))
    return record("synthetic.dihedral.23", 23, chi, 24, ap, None,
                  "synthetic negative control: dihedral rotations of order up to 12")


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    chi, ap = make_283()
    recs = [record("derived.283", 283, chi, 8, ap, ascending(minimal_polynomial(sqrt(-2), x)),
                   "a_p sign-normalised; the projective class comes from x^4 - x - 1 mod p")]
    recs.append(make_twist(chi, ap, 5, 4, ascending(sympy.cyclotomic_poly(8, x))))
    recs.append(make_twist(chi, ap, 7, 3, ascending(minimal_polynomial(sqrt(-2) + sqrt(-3), x))))
    recs.append(make_twist(chi, ap, 17, 8, ascending(sympy.cyclotomic_poly(8, x))))
    recs.append(synthetic("synthetic.A4.7", "2A4", char_with(7, 6, -1), 12, 7,
                          ascending(sympy.cyclotomic_poly(12, x))))
    recs.append(synthetic("synthetic.A5.11", "2A5", char_with(11, 10, -1), 20, 11,
                          ascending(sympy.cyclotomic_poly(20, x))))
    recs.append(synthetic("synthetic.A5.3", "2A5", ConreyChar(3, 2), 20, 3,
                          ascending(minimal_polynomial(I + sqrt(5), x))))
    recs.append(dihedral(23))
    with open(DATA / "newforms.jsonl", "w", encoding="utf-8") as fh:
        for r in recs:
            fh.write(json.dumps(r, sort_keys=True) + "\n")

    bad = json.loads(json.dumps(recs[0]))
    bad["label"] = "derived.283.corrupted"
    bad["note"] = "negative control: one a_p = 0 replaced by sqrt(2)"
    victim = next(p for p in sorted(ap, key=int) if ap[p].is_zero() and chi.exponent(p) == 0)
    bad["ap"][str(victim)] = named_surd("sqrt2").to_json()
    with open(DATA / "newforms_corrupted.jsonl", "w", encoding="utf-8") as fh:
        fh.write(json.dumps(bad, sort_keys=True) + "\n")
    print(f"wrote {len(recs)} records and 1 corrupted record (a_{victim}) to {DATA}")


if __name__ == "__main__":
    main()
