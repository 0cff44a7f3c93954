"""Exact arithmetic in cyclotomic fields and their subfields.

Elements of Q(zeta_M) are stored sparsely on a basis made of roots of
unity: for each prime power p^e || M a local basis is chosen
(zeta^j with 0 <= j < 2^(e-1) when p = 2, zeta^j with j >= p^(e-1) when
p is odd) and the basis of Q(zeta_M) is the tensor product via CRT.  On this
basis a Galois automorphism sigma_t moves each basis vector to a signed basis
vector whenever the odd part of M is squarefree, which keeps conjugation and
fixing-group computations cheap.  The power basis modulo the cyclotomic
polynomial is still what ``CycElt.coeffs`` reports and what the JSON format
uses.

Subfields are handled through the Galois correspondence: a ``Subfield`` is the
fixed field of a subgroup H of (Z/M)^x.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from math import gcd
from typing import Iterable, Mapping, Sequence

from sympy import factorint

__all__ = [
    "CycElt",
    "Subfield",
    "arith",
    "cyclotomic_poly",
    "embed",
    "euler_phi",
    "fixing_group",
    "min_poly",
    "named_surd",
    "reduce_poly",
    "splits_completely",
    "subfield_equal",
    "units",
    "zeta",
]


def lcm(*ns: int) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), ns, 1)


@lru_cache(maxsize=None)
def factor(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(factorint(n).items()))


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    out = n
    for p, _ in factor(n):
        out = out // p * (p - 1)
    return out


def mobius(n: int) -> int:
    fs = factor(n)
    if any(e > 1 for _, e in fs):
        return 0
    return -1 if len(fs) % 2 else 1


@lru_cache(maxsize=None)
def units(n: int) -> tuple[int, ...]:
    """Residues in [0, n) coprime to n; for n = 1 this is (0,)."""
    if n == 1:
        return (0,)
    return tuple(t for t in range(1, n) if gcd(t, n) == 1)


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    return tuple(d for d in range(1, n + 1) if n % d == 0)


# -- integer polynomials (ascending coefficient lists) ------------------------

def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_exact_div(a: Sequence[int], b: Sequence[int]) -> list[int]:
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(q) - 1, -1, -1):
        c, r = divmod(a[i + len(b) - 1], lead)
        assert r == 0
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    assert not any(a[: len(b) - 1])
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Phi_n, ascending coefficients, via prod_{d | n} (x^d - 1)^mu(n/d)."""
    num, den = [1], [1]
    for d in divisors(n):
        mu = mobius(n // d)
        if mu == 0:
            continue
        factor_ = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            num = _poly_mul(num, factor_)
        else:
            den = _poly_mul(den, factor_)
    return tuple(_poly_exact_div(num, den))


# -- the root basis -----------------------------------------------------------

class _Basis:
    """Reduction data for Q(zeta_M)."""

    def __init__(self, M: int):
        self.M = M
        self.phi = euler_phi(M)
        parts = [(p ** e, p, e) for p, e in factor(M)]
        idem = []
        for q, _, _ in parts:
            rest = M // q
            # CRT idempotent: 1 mod q, 0 mod the rest
            idem.append(rest * pow(rest, -1, q) % M if q > 1 else 0)
        red: list[tuple[tuple[int, int], ...]] = []
        for j in range(M):
            terms = {0: 1}
            for (q, p, e), ep in zip(parts, idem):
                local = _local_expansion(j % q, q, p, e)
                new: dict[int, int] = {}
                for k, c in terms.items():
                    for lk, lc in local:
                        key = (k + lk * ep) % M
                        new[key] = new.get(key, 0) + c * lc
                terms = new
            red.append(tuple(sorted((k, c) for k, c in terms.items() if c)))
        self.red = red
        self.exponents = tuple(j for j in range(M) if red[j] == ((j, 1),))
        assert len(self.exponents) == self.phi
        self.one = red[0]

    @cached_property
    def power_rows(self) -> dict[int, tuple[int, ...]]:
        """Power-basis vector of zeta^j for every basis exponent j."""
        phi_poly = cyclotomic_poly(self.M)
        n = self.phi
        rows = {}
        vec = [0] * n
        vec[0] = 1
        wanted = set(self.exponents)
        for j in range(self.M):
            if j in wanted:
                rows[j] = tuple(vec)
            # multiply by x, then reduce the x^n term
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for i in range(n):
                    vec[i] -= top * phi_poly[i]
        return rows


def _local_expansion(j: int, q: int, p: int, e: int) -> tuple[tuple[int, int], ...]:
    if q == 1:
        return ((0, 1),)
    if p == 2:
        half = q // 2
        return ((j, 1),) if j < half else ((j - half, -1),)
    s = q // p
    if j >= s:
        return ((j, 1),)
    return tuple((j + s * k, -1) for k in range(1, p))


@lru_cache(maxsize=None)
def _basis(M: int) -> _Basis:
    return _Basis(M)


def _scaled(pairs) -> tuple[int, list[tuple[int, int]]]:
    """Common denominator and integer numerators of (key, Fraction) pairs."""
    pairs = list(pairs)
    den = 1
    for _, x in pairs:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = den * x.denominator // gcd(den, x.denominator)
    if den == 1:
        return 1, [(k, int(x)) for k, x in pairs]
    return den, [(k, x.numerator * (den // x.denominator)) for k, x in pairs]


def _from_ints(M: int, acc: Mapping[int, int], den: int) -> "CycElt":
    self = object.__new__(CycElt)
    self.modulus = M
    self._terms = tuple(sorted((k, Fraction(v, den)) for k, v in acc.items() if v))
    self._hash = None
    return self


def _collect(M: int, pairs: Iterable[tuple[int, Fraction]]) -> "CycElt":
    red = _basis(M).red
    den, ints = _scaled(pairs)
    acc: dict[int, int] = {}
    get = acc.get
    for j, x in ints:
        for k, c in red[j % M]:
            acc[k] = get(k, 0) + x * c
    return _from_ints(M, acc, den)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class CycElt:
    """An exact element of Q(zeta_M).

    Build with ``zeta(M, j)``, ``CycElt.rational(q, M)``, ``reduce_poly`` or
    from arithmetic.  Instances are immutable; mixing moduli embeds both
    operands into Q(zeta_lcm).
    """

    __slots__ = ("modulus", "_terms", "_hash")

    def __init__(self, modulus: int, terms: Mapping[int, Fraction] | None = None):
        if modulus < 1:
            raise ValueError("modulus must be >= 1")
        if terms:
            self._init_from(_collect(modulus, ((j, _as_fraction(x)) for j, x in terms.items())))
        else:
            self.modulus = modulus
            self._terms = ()
            self._hash = None

    def _init_from(self, other: "CycElt") -> None:
        self.modulus = other.modulus
        self._terms = other._terms
        self._hash = None

    @classmethod
    def _raw(cls, M: int, acc: Mapping[int, Fraction]) -> "CycElt":
        self = object.__new__(cls)
        self.modulus = M
        self._terms = tuple(sorted((k, Fraction(v)) for k, v in acc.items() if v))
        self._hash = None
        return self

    @classmethod
    def rational(cls, q, modulus: int = 1) -> "CycElt":
        q = _as_fraction(q)
        return cls._raw(modulus, {k: q * c for k, c in _basis(modulus).one})

    # -- views ------------------------------------------------------------
    @property
    def terms(self) -> dict[int, Fraction]:
        """Coordinates on the root basis: {exponent: coefficient}."""
        return dict(self._terms)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Coordinates on the power basis 1, zeta, ..., zeta^(phi(M)-1)."""
        b = _basis(self.modulus)
        out = [Fraction(0)] * b.phi
        rows = b.power_rows
        for j, x in self._terms:
            for i, c in enumerate(rows[j]):
                if c:
                    out[i] += x * c
        return tuple(out)

    def is_zero(self) -> bool:
        return not self._terms

    def rational_value(self) -> Fraction | None:
        """The rational number this element equals, or None."""
        if not self._terms:
            return Fraction(0)
        one = _basis(self.modulus).one
        if len(one) != len(self._terms):
            return None
        ratio = None
        for (j, x), (k, c) in zip(self._terms, one):
            if j != k:
                return None
            r = x / c
            if ratio is None:
                ratio = r
            elif r != ratio:
                return None
        return ratio

    def is_rational(self) -> bool:
        return self.rational_value() is not None

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "CycElt":
        if isinstance(other, CycElt):
            return other
        if isinstance(other, (int, Fraction)):
            return CycElt.rational(other, self.modulus)
        return NotImplemented

    def _common(self, other: "CycElt") -> tuple["CycElt", "CycElt"]:
        if self.modulus == other.modulus:
            return self, other
        L = lcm(self.modulus, other.modulus)
        return self.embed(L), other.embed(L)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._common(other)
        da, ia = _scaled(a._terms)
        db, ib = _scaled(b._terms)
        den = da * db // gcd(da, db)
        sa, sb = den // da, den // db
        acc = {k: x * sa for k, x in ia}
        for k, x in ib:
            acc[k] = acc.get(k, 0) + x * sb
        return _from_ints(a.modulus, acc, den)

    __radd__ = __add__

    def __neg__(self):
        return CycElt._raw(self.modulus, {k: -x for k, x in self._terms})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycElt._raw(self.modulus, {k: q * x for k, x in self._terms})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._common(other)
        M = a.modulus
        red = _basis(M).red
        da, ia = _scaled(a._terms)
        db, ib = _scaled(b._terms)
        # multiply in exponent space first, then reduce each exponent once
        raw: dict[int, int] = {}
        for i, x in ia:
            for j, y in ib:
                e = (i + j) % M
                raw[e] = raw.get(e, 0) + x * y
        acc: dict[int, int] = {}
        get = acc.get
        for e, v in raw.items():
            if v:
                for k, c in red[e]:
                    acc[k] = get(k, 0) + v * c
        return _from_ints(M, acc, da * db)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = CycElt.rational(1, self.modulus)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "CycElt":
        if not self._terms:
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        M = self.modulus
        if len(self._terms) == 1:
            (j, x), = self._terms
            return _collect(M, [((-j) % M, 1 / x)])
        q = self.rational_value()
        if q is not None:
            return CycElt.rational(1 / q, M)
        # a^-1 = (product of the other conjugates) / norm, over Q(a)
        reps = _coset_reps(M, stabilizer(self))
        others = CycElt.rational(1, M)
        for t in reps:
            if t % M != 1 % M:
                others = others * self.conjugate(t)
        norm = (others * self).rational_value()
        assert norm is not None and norm != 0
        return others * (1 / norm)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, CycElt) and other.is_zero():
            raise ZeroDivisionError("division by zero in a cyclotomic field")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    # -- Galois action and embeddings --------------------------------------
    def conjugate(self, t: int) -> "CycElt":
        """sigma_t(self) where sigma_t(zeta_M) = zeta_M^t, gcd(t, M) = 1."""
        M = self.modulus
        return _collect(M, [((t * j) % M, x) for j, x in self._terms])

    def embed(self, target_modulus: int) -> "CycElt":
        M = self.modulus
        if target_modulus % M:
            raise ValueError(f"cannot embed Q(zeta_{M}) into Q(zeta_{target_modulus})")
        if target_modulus == M:
            return self
        s = target_modulus // M
        return _collect(target_modulus, [(j * s, x) for j, x in self._terms])

    def restrict(self, modulus: int) -> "CycElt":
        """Express self inside Q(zeta_modulus), assuming it lies there."""
        M = self.modulus
        if M % modulus:
            big = lcm(M, modulus)
            return self.embed(big).restrict(modulus)
        if modulus == M:
            return self
        return _solve_restriction(self, modulus)

    def conductor(self) -> int:
        return Subfield.generated_by([self], self.modulus).conductor

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.rational_value() == other
        if not isinstance(other, CycElt):
            return NotImplemented
        if self.modulus == other.modulus:
            return self._terms == other._terms
        a, b = self._common(other)
        return a._terms == b._terms

    def __hash__(self):
        # the normalized trace is independent of the ambient modulus
        if self._hash is None:
            M = self.modulus
            h = Fraction(0)
            for j, x in self._terms:
                n = M // gcd(M, j)
                h += x * Fraction(mobius(n), euler_phi(n))
            self._hash = hash(h)
        return self._hash

    def key(self) -> tuple:
        return (self.modulus, self._terms)

    def __repr__(self):
        if not self._terms:
            return f"CycElt({self.modulus}, 0)"
        q = self.rational_value()
        if q is not None:
            return f"CycElt({self.modulus}, {q})"
        body = " + ".join(f"{x}*z^{j}" for j, x in self._terms)
        return f"CycElt({self.modulus}, {body})"

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "CycElt":
        M = int(obj["modulus"])
        coeffs = [_as_fraction(c) for c in obj["coeffs"]]
        if len(coeffs) != euler_phi(M):
            raise ValueError(f"expected {euler_phi(M)} coefficients for modulus {M}")
        return reduce_poly(M, coeffs)


# An element of Q(zeta_m) inside Q(zeta_M) is recovered by solving against the
# embedded basis of Q(zeta_m).  Dense and slow; only used for conductor round
# trips, never in the hot loops.

def _solve_restriction(a: CycElt, m: int) -> CycElt:
    small = _basis(m)
    cols = [zeta(m, j).embed(a.modulus) for j in small.exponents]
    big_exps = _basis(a.modulus).exponents
    index = {j: i for i, j in enumerate(big_exps)}
    n_rows, n_cols = len(big_exps), len(cols)
    mat = [[Fraction(0)] * (n_cols + 1) for _ in range(n_rows)]
    for c, col in enumerate(cols):
        for j, x in col._terms:
            mat[index[j]][c] = x
    for j, x in a._terms:
        mat[index[j]][n_cols] = x
    # Gauss-Jordan on the overdetermined, consistent system
    row = 0
    pivots = []
    for c in range(n_cols):
        piv = next((r for r in range(row, n_rows) if mat[r][c] != 0), None)
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        inv = 1 / mat[row][c]
        mat[row] = [v * inv for v in mat[row]]
        for r in range(n_rows):
            if r != row and mat[r][c] != 0:
                f = mat[r][c]
                mat[r] = [v - f * w for v, w in zip(mat[r], mat[row])]
        pivots.append(c)
        row += 1
    if any(mat[r][n_cols] != 0 for r in range(row, n_rows)):
        raise ValueError(f"element does not lie in Q(zeta_{m})")
    sol = {small.exponents[c]: mat[r][n_cols] for r, c in enumerate(pivots)}
    return CycElt._raw(m, sol)


def zeta(M: int, j: int = 1) -> CycElt:
    """zeta_M^j."""
    return _collect(M, [(j % M, Fraction(1))])


def reduce_poly(modulus: int, raw: Sequence | Mapping) -> CycElt:
    """Reduce a rational polynomial in zeta_M to canonical form.

    ``raw`` is either an ascending coefficient sequence or a mapping
    {exponent: coefficient}; exponents may exceed phi(M) or M.
    """
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    items = raw.items() if isinstance(raw, Mapping) else enumerate(raw)
    return _collect(modulus, [(int(j), _as_fraction(x)) for j, x in items])


def arith(a: CycElt, b: CycElt, op: str) -> CycElt:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def embed(a: CycElt, target_modulus: int) -> CycElt:
    return a.embed(target_modulus)


_SURDS = {
    # Gauss-sum representatives; each squares to the named rational
    "sqrt5": (5, {1: 1, 2: -1, 3: -1, 4: 1}),
    "sqrt2": (8, {1: 1, 7: 1}),
    "sqrtm2": (8, {1: 1, 3: 1}),
    "sqrtm1": (4, {1: 1}),
}


def named_surd(which: str) -> CycElt:
    try:
        M, raw = _SURDS[which]
    except KeyError:
        raise ValueError(f"unknown surd {which!r}; expected one of {sorted(_SURDS)}") from None
    return reduce_poly(M, raw)


# -- Galois correspondence ------------------------------------------------------

def _subgroup_closure(M: int, gens: Iterable[int]) -> frozenset[int]:
    one = 1 % M
    H = {one}
    frontier = [one]
    gens = [g % M for g in gens]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                x = h * g % M
                if x not in H:
                    H.add(x)
                    nxt.append(x)
        frontier = nxt
    return frozenset(H)


def _coset_reps(M: int, H: Iterable[int]) -> list[int]:
    H = set(H)
    seen: set[int] = set()
    reps = []
    for t in units(M):
        if t in seen:
            continue
        reps.append(t)
        seen.update(t * h % M for h in H)
    return reps


def _stabilizer_within(a: CycElt, group: Iterable[int]) -> frozenset[int]:
    """{t in group : sigma_t(a) = a}; group must be a subgroup of (Z/M)^x.

    Walks the group skipping known cosets, so the number of conjugations is
    about [group : stabilizer] plus the number of generators found.
    """
    M = a.modulus
    group = list(group)
    H = frozenset({1 % M})
    bad: set[int] = set()
    for t in group:
        if t in H or t in bad:
            continue
        if a.conjugate(t) == a:
            H = _subgroup_closure(M, list(H) + [t])
            bad = {b * h % M for b in bad for h in H}
        else:
            bad.update(t * h % M for h in H)
    return H


def stabilizer(a: CycElt) -> frozenset[int]:
    return _stabilizer_within(a, units(a.modulus))


class Subfield:
    """The subfield of Q(zeta_M) fixed by a subgroup H of (Z/M)^x."""

    __slots__ = ("ambient", "fixing_group", "__dict__")

    def __init__(self, ambient: int, fixing_group: Iterable[int]):
        H = tuple(sorted({int(t) % ambient for t in fixing_group}))
        if ambient < 1:
            raise ValueError("ambient modulus must be >= 1")
        if 1 % ambient not in H:
            raise ValueError("fixing group must contain 1")
        Hs = set(H)
        for a in H:
            if gcd(a, ambient) != 1 and ambient > 1:
                raise ValueError(f"{a} is not a unit mod {ambient}")
            for b in H:
                if a * b % ambient not in Hs:
                    raise ValueError("fixing group is not closed under multiplication")
        self.ambient = ambient
        self.fixing_group = H

    # -- constructors -----------------------------------------------------
    @classmethod
    def rationals(cls) -> "Subfield":
        return cls(1, [0])

    @classmethod
    def cyclotomic(cls, n: int) -> "Subfield":
        return cls(n, [1 % n])

    @classmethod
    def quadratic(cls, disc: int) -> "Subfield":
        """Q(sqrt(disc)) for a fundamental discriminant, via the Kronecker symbol."""
        M = abs(disc)
        return cls(M, [t for t in units(M) if kronecker(disc, t) == 1])

    @classmethod
    def generated_by(cls, elts: Iterable[CycElt], ambient: int | None = None) -> "Subfield":
        return fixing_group(elts, ambient)

    # -- derived data -------------------------------------------------------
    @property
    def degree(self) -> int:
        return euler_phi(self.ambient) // len(self.fixing_group)

    @cached_property
    def conductor(self) -> int:
        H = set(self.fixing_group)
        M = self.ambient
        for f in divisors(M):
            if all(t in H for t in units(M) if t % f == 1 % f):
                return f
        raise AssertionError("unreachable: f = M always qualifies")

    def normalized(self) -> "Subfield":
        f = self.conductor
        if f == self.ambient:
            return self
        return Subfield(f, {t % f for t in self.fixing_group})

    def lift(self, modulus: int) -> frozenset[int]:
        """Fixing group of this field inside Q(zeta_modulus)."""
        F = self.normalized()
        f = F.conductor
        if modulus % f:
            raise ValueError(f"field of conductor {f} does not lie in Q(zeta_{modulus})")
        H = set(F.fixing_group)
        return frozenset(t for t in units(modulus) if t % f in H)

    def in_ambient(self, modulus: int) -> "Subfield":
        return Subfield(modulus, self.lift(modulus))

    def join(self, other: "Subfield") -> "Subfield":
        L = lcm(self.conductor, other.conductor)
        return Subfield(L, self.lift(L) & other.lift(L))

    def meet(self, other: "Subfield") -> "Subfield":
        L = lcm(self.conductor, other.conductor)
        return Subfield(L, _subgroup_closure(L, self.lift(L) | other.lift(L)))

    def issubfield(self, other: "Subfield") -> bool:
        L = lcm(self.conductor, other.conductor)
        return other.lift(L) <= self.lift(L)

    def contains(self, a: CycElt) -> bool:
        L = lcm(self.conductor, a.modulus)
        b = a.embed(L)
        return all(b.conjugate(t) == b for t in self.lift(L))

    # -- comparison / display ------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Subfield):
            return NotImplemented
        return subfield_equal(self, other)

    def __hash__(self):
        F = self.normalized()
        return hash((F.ambient, F.fixing_group))

    def __repr__(self):
        F = self.normalized()
        return f"Subfield(conductor={F.ambient}, degree={F.degree}, fixing_group={list(F.fixing_group)})"

    def describe(self) -> str:
        """Readable name: Q, Q(zeta_n), Q(sqrt(D)) or Q(zeta_n, sqrt(D)) when it fits."""
        F = self.normalized()
        f = F.ambient
        if F.degree == 1:
            return "Q"
        if F.degree == euler_phi(f):
            return f"Q(zeta_{f})"
        # largest cyclotomic subfield, then look for one quadratic generator on top
        n = max((n for n in divisors(f) if Subfield.cyclotomic(n).issubfield(F)), default=1)
        base = Subfield.cyclotomic(n)
        if F.degree == 2 * base.degree:
            for D in sorted({s * t for t in divisors(f) for s in (1, -1)}, key=abs):
                if D in (1, -1) or D % 4 not in (0, 1):
                    continue
                Q = Subfield.quadratic(D)
                if len(set(Q.fixing_group)) * 2 != euler_phi(abs(D)):
                    continue
                if base.join(Q) == F:
                    root = f"sqrt({_squarefree_kernel(D)})"
                    n = n // 2 if n % 4 == 2 else n
                    return f"Q({root})" if n <= 2 else f"Q(zeta_{n}, {root})"
        return f"subfield of Q(zeta_{f}) of degree {F.degree}"

    def to_json(self) -> dict:
        return {"ambient": self.ambient, "fixing_group": list(self.fixing_group)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Subfield":
        return cls(int(obj["ambient"]), [int(t) for t in obj["fixing_group"]])


def _squarefree_kernel(D: int) -> int:
    out = -1 if D < 0 else 1
    for p, e in factor(abs(D)):
        if e % 2:
            out *= p
    return out


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D / n) for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    out = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        out *= 1 if D % 8 in (1, 7) else -1
    # Jacobi symbol (D / n), n odd
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                out = -out
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            out = -out
        a %= n
    return out if n == 1 else 0


def fixing_group(elts: Iterable[CycElt], ambient: int | None = None) -> Subfield:
    """The field Q(elts) as a Subfield of Q(zeta_ambient).

    The ambient defaults to the lcm of the element moduli.
    """
    elts = list(elts)
    M = ambient or lcm(*(e.modulus for e in elts)) or 1
    H: frozenset[int] = frozenset(units(M))
    for e in elts:
        if M % e.modulus:
            raise ValueError(f"element over zeta_{e.modulus} does not embed in zeta_{M}")
        e = e.embed(M)
        if len(H) == 1:
            break
        H = _stabilizer_within(e, sorted(H))
    return Subfield(M, H)


def subfield_equal(F: Subfield, G: Subfield) -> bool:
    a, b = F.normalized(), G.normalized()
    return a.ambient == b.ambient and a.fixing_group == b.fixing_group


def min_poly(F: Subfield) -> tuple[int, ...]:
    """Minimal polynomial (ascending, monic) of a primitive element of F.

    The primitive element is the H-orbit sum of zeta_M, or of zeta_M + zeta_M^k
    for k = 2, 3, ... when that sum has a larger stabilizer.
    """
    F = F.normalized()
    M, H = F.ambient, set(F.fixing_group)
    candidates = [zeta(M)] + [zeta(M) + zeta(M, k) for k in range(2, 2 * M + 2)]
    for base in candidates:
        eta = CycElt(M)
        for h in H:
            eta = eta + base.conjugate(h)
        if stabilizer(eta) == H:
            break
    else:
        raise AssertionError(f"no primitive orbit sum found for {F!r}")
    poly = [CycElt.rational(1, M)]
    for t in _coset_reps(M, H):
        root = eta.conjugate(t)
        # poly *= (x - root)
        new = [CycElt(M) for _ in range(len(poly) + 1)]
        for i, c in enumerate(poly):
            new[i + 1] = new[i + 1] + c
            new[i] = new[i] - c * root
        poly = new
    out = []
    for c in poly:
        q = c.rational_value()
        assert q is not None and q.denominator == 1, "orbit product is not integral"
        out.append(int(q))
    return tuple(out)


def splits_completely(F: Subfield, q: int) -> bool:
    """True iff the prime q splits completely in F (Frobenius is trivial)."""
    F = F.normalized()
    f = F.conductor
    if f > 1 and q % f == 0 or gcd(q, f) != 1:
        raise ValueError(f"prime {q} divides the conductor {f}")
    return q % f in F.fixing_group
