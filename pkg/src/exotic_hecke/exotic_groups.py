"""Finite subgroups of GL_2 over cyclotomic fields with exotic projective image.

Models (quaternion i -> diag(i, -i), j -> [[0, 1], [-1, 0]], k = ij):

======  =====  ==========  ========================================  =======
kind    order  proj image  generators                                ambient
======  =====  ==========  ========================================  =======
2A4     24     A4          i, j, (1+i+j+k)/2                          4
2O      48     S4          2A4 and diag(z8, z8^-1), det = 1           8
GL23    48     S4          2A4 and diag(z8^3, z8), det = sgn          8
4S4     96     S4          2A4 and diag(i, 1), det^2 = sgn            4
2A5     120    A5          2A4 and (phi + phi^-1 i + j)/2             20
======  =====  ==========  ========================================  =======

4S4 is the shape of image with det(s)^2 = sgn(s-bar); it is the only model here
whose determinant squares to the sign character, which is what makes the
"chi^(d/2) = sgn" branch reachable with d = 4 by scalar twists.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .cyclo import CycElt, lcm, named_surd, zeta

__all__ = [
    "KINDS",
    "Mat2",
    "MatGroup",
    "build_group",
    "c_value",
    "cyclic_subgroup_orders",
    "proj_order",
    "root_of_unity_exponent",
    "sgn",
    "verify_bl",
]

KINDS = ("2A4", "2O", "GL23", "4S4", "2A5")
PROJ_TYPE = {"2A4": "A4", "2O": "S4", "GL23": "S4", "4S4": "S4", "2A5": "A5"}
_ORDERS = {"2A4": 24, "2O": 48, "GL23": 48, "4S4": 96, "2A5": 120}
_PROJ_ORDERS = {"A4": 12, "S4": 24, "A5": 60}
# a representative double cover per projective type
TYPE_MODEL = {"A4": "2A4", "S4": "2O", "A5": "2A5"}


class Mat2:
    """2x2 matrix over Q(zeta_M); all four entries share the modulus M."""

    __slots__ = ("a", "b", "c", "d", "modulus", "_key")

    def __init__(self, a, b, c, d, modulus: int | None = None):
        entries = [x if isinstance(x, CycElt) else CycElt.rational(x) for x in (a, b, c, d)]
        M = modulus or lcm(*(x.modulus for x in entries))
        self.a, self.b, self.c, self.d = (x.embed(M) for x in entries)
        self.modulus = M
        self._key = None

    @classmethod
    def identity(cls, M: int = 1) -> "Mat2":
        return cls(1, 0, 0, 1, M)

    @classmethod
    def scalar(cls, z: CycElt) -> "Mat2":
        return cls(z, 0, 0, z)

    def __mul__(self, other):
        if isinstance(other, (CycElt, int, Fraction)):
            return Mat2(self.a * other, self.b * other, self.c * other, self.d * other)
        if self.modulus != other.modulus:
            M = lcm(self.modulus, other.modulus)
            return self.embed(M) * other.embed(M)
        return Mat2(self.a * other.a + self.b * other.c,
                    self.a * other.b + self.b * other.d,
                    self.c * other.a + self.d * other.c,
                    self.c * other.b + self.d * other.d, self.modulus)

    __rmul__ = __mul__

    def embed(self, M: int) -> "Mat2":
        return Mat2(self.a, self.b, self.c, self.d, M)

    def det(self) -> CycElt:
        return self.a * self.d - self.b * self.c

    def trace(self) -> CycElt:
        return self.a + self.d

    def inverse(self) -> "Mat2":
        det = self.det()
        if det.is_zero():
            raise ZeroDivisionError("singular matrix")
        inv = det.inverse()
        return Mat2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv, self.modulus)

    def is_scalar(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and self.a == self.d

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.modulus, self.a.key()[1], self.b.key()[1], self.c.key()[1], self.d.key()[1])
        return self._key

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Mat2([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


def _quat(a, b, c, d) -> Mat2:
    i = zeta(4)
    return Mat2(a + b * i, c + d * i, -c + d * i, a - b * i)


def _generators(kind: str) -> list[Mat2]:
    half = Fraction(1, 2)
    two_a4 = [_quat(0, 1, 0, 0), _quat(0, 0, 1, 0), _quat(half, half, half, half)]
    if kind == "2A4":
        return two_a4
    if kind == "2O":
        return two_a4 + [Mat2(zeta(8), 0, 0, zeta(8, 7))]
    if kind == "GL23":
        return two_a4 + [Mat2(zeta(8, 3), 0, 0, zeta(8))]
    if kind == "4S4":
        return two_a4 + [Mat2(zeta(4), 0, 0, 1)]
    if kind == "2A5":
        s5 = named_surd("sqrt5")
        phi = (1 + s5) * half
        return [g.embed(20) for g in two_a4] + [_quat(phi * half, (phi - 1) * half, half, 0).embed(20)]
    raise ValueError(f"unknown group kind {kind!r}; expected one of {KINDS}")


def _closure(gens: list[Mat2], limit: int) -> list[Mat2]:
    M = lcm(*(g.modulus for g in gens))
    gens = [g.embed(M) for g in gens]
    one = Mat2.identity(M)
    seen = {one.key(): one}
    frontier = [one]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                x = h * g
                k = x.key()
                if k not in seen:
                    seen[k] = x
                    nxt.append(x)
                    if len(seen) > limit:
                        raise AssertionError(f"closure exceeded {limit} elements: generator bug")
        frontier = nxt
    return list(seen.values())


def root_of_unity_exponent(z: CycElt) -> Fraction:
    """r in [0, 1) with z = exp(2 pi i r); raises if z is not a root of unity."""
    L = lcm(2, z.modulus)
    for k in range(L):
        if zeta(L, k) == z:
            return Fraction(k, L)
    raise ValueError(f"{z!r} is not a root of unity")


class MatGroup:
    """A finite matrix group together with its projective image.

    ``proj_class[i]`` is the index of the scalar class of ``elements[i]``;
    classes are the cosets of the scalar subgroup.
    """

    def __init__(self, kind: str, elements: list[Mat2], generators: list[Mat2]):
        self.kind = kind
        self.elements = elements
        self.modulus = elements[0].modulus
        self.generators = [g.embed(self.modulus) for g in generators]
        self.index = {g.key(): i for i, g in enumerate(elements)}
        # right multiplication by each generator, as a permutation of indices
        self._right = [[self.index[(g * h).key()] for g in elements] for h in self.generators]
        self._words = self._bfs_words()
        self.scalars = [i for i, g in enumerate(elements) if g.is_scalar()]
        cls_of = [-1] * len(elements)
        reps = []
        for i, g in enumerate(elements):
            if cls_of[i] >= 0:
                continue
            c = len(reps)
            reps.append(i)
            for s in self.scalars:
                cls_of[self.index[(g * elements[s]).key()]] = c
        self.proj_class = cls_of
        self.class_reps = reps
        n = len(reps)
        self.proj_mul = [[cls_of[self.multiply(reps[x], reps[y])] for y in range(n)] for x in range(n)]
        self.proj_identity = cls_of[self.index[Mat2.identity(self.modulus).key()]]
        self.proj_orders = [self._class_order(x) for x in range(n)]
        self.commutator_proj = self._commutator_subgroup()
        self._det_exp: list[Fraction] | None = None

    def _bfs_words(self) -> list[tuple[int, ...]]:
        start = self.index[Mat2.identity(self.modulus).key()]
        words: dict[int, tuple[int, ...]] = {start: ()}
        frontier = [start]
        while frontier:
            nxt = []
            for i in frontier:
                for gi, perm in enumerate(self._right):
                    j = perm[i]
                    if j not in words:
                        words[j] = words[i] + (gi,)
                        nxt.append(j)
            frontier = nxt
        if len(words) != len(self.elements):
            raise ValueError("generators do not generate the element list")
        return [words[i] for i in range(len(self.elements))]

    def multiply(self, i: int, j: int) -> int:
        """Index of elements[i] * elements[j]."""
        for gi in self._words[j]:
            i = self._right[gi][i]
        return i

    @property
    def proj_type(self) -> str:
        return PROJ_TYPE.get(self.kind, {12: "A4", 24: "S4", 60: "A5"}[len(self.class_reps)])

    def __len__(self):
        return len(self.elements)

    def _class_order(self, x: int) -> int:
        y, n = x, 1
        while y != self.proj_identity:
            y = self.proj_mul[y][x]
            n += 1
        return n

    def _proj_inverse(self, x: int) -> int:
        return next(y for y in range(len(self.class_reps)) if self.proj_mul[x][y] == self.proj_identity)

    def _commutator_subgroup(self) -> frozenset[int]:
        n = len(self.class_reps)
        inv = [self._proj_inverse(x) for x in range(n)]
        mul = self.proj_mul
        comms = {mul[mul[inv[x]][inv[y]]][mul[x][y]] for x in range(n) for y in range(n)}
        sub = set(comms)
        frontier = list(sub)
        while frontier:
            nxt = []
            for a in frontier:
                for b in comms:
                    c = mul[a][b]
                    if c not in sub:
                        sub.add(c)
                        nxt.append(c)
            frontier = nxt
        return frozenset(sub)

    def element_index(self, g: Mat2) -> int:
        try:
            return self.index[g.embed(self.modulus).key()]
        except (KeyError, ValueError):
            raise ValueError("matrix is not an element of this group") from None

    def proj_order_of(self, i: int) -> int:
        return self.proj_orders[self.proj_class[i]]

    def sgn_of(self, i: int) -> int:
        if self.proj_type != "S4":
            raise TypeError(f"sgn is only defined for projective image S4, not {self.proj_type}")
        return 1 if self.proj_class[i] in self.commutator_proj else -1

    @property
    def det_exponents(self) -> list[Fraction]:
        if self._det_exp is None:
            cache: dict = {}
            out = []
            for g in self.elements:
                det = g.det()
                k = det.key()
                if k not in cache:
                    cache[k] = root_of_unity_exponent(det)
                out.append(cache[k])
            self._det_exp = out
        return self._det_exp

    def conjugated(self, P: Mat2) -> "MatGroup":
        Pinv = P.inverse()
        M = lcm(self.modulus, P.modulus)
        return MatGroup(self.kind, [(P * g * Pinv).embed(M) for g in self.elements],
                        [(P * g * Pinv).embed(M) for g in self.generators])

    def check_axioms(self) -> bool:
        """Closure and inverses, checked with explicit matrix products."""
        keys = set(self.index)
        one = Mat2.identity(self.modulus).key()
        for g in self.elements:
            if g.inverse().key() not in keys:
                return False
            for h in self.elements:
                if (g * h).key() not in keys:
                    return False
        return one in keys


@lru_cache(maxsize=None)
def build_group(kind: str) -> MatGroup:
    """Closure of the fixed generators of ``kind``; sizes are hard-checked."""
    gens = _generators(kind)
    expected = _ORDERS[kind]
    elements = _closure(gens, expected)
    if len(elements) != expected:
        raise AssertionError(f"{kind}: closure has {len(elements)} elements, expected {expected}")
    G = MatGroup(kind, elements, gens)
    want = _PROJ_ORDERS[PROJ_TYPE[kind]]
    if len(G.class_reps) != want:
        raise AssertionError(f"{kind}: projective image has {len(G.class_reps)} elements, expected {want}")
    return G


def proj_order(G: MatGroup, g: Mat2) -> int:
    return G.proj_order_of(G.element_index(g))


def sgn(G: MatGroup, g: Mat2) -> int:
    return G.sgn_of(G.element_index(g))


def c_value(g: Mat2) -> CycElt:
    """trace(g)^2 / det(g)."""
    det = g.det()
    if det.is_zero():
        raise ZeroDivisionError("c-value of a singular matrix")
    tr = g.trace()
    return tr * tr / det


def expected_c_values(n: int) -> list[CycElt]:
    """2 + z + z^-1 for every primitive n-th root of unity z."""
    return [2 + zeta(n, j) + zeta(n, -j) for j in range(n) if gcd(j, n) == 1] if n > 1 else [CycElt.rational(4)]


@dataclass
class BLReport:
    kind: str
    passed: bool
    n_elements: int
    c_values: dict[int, list[str]]
    order5_split: dict[str, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "n_elements": self.n_elements,
            "c_values": {str(k): v for k, v in sorted(self.c_values.items())},
            "order5_split": self.order5_split,
            "failures": self.failures,
        }


def _c_label(c: CycElt) -> str:
    q = c.rational_value()
    if q is not None:
        return str(q)
    s5 = named_surd("sqrt5")
    for sign, name in ((1, "(3+sqrt5)/2"), (-1, "(3-sqrt5)/2")):
        if c == (3 + sign * s5) * Fraction(1, 2):
            return name
    return repr(c)


def verify_bl(G: MatGroup) -> BLReport:
    """Check c(g) = 2 + z + 1/z with z a primitive proj_order-th root, for every element,
    and that c is unchanged when the lift is multiplied by any scalar of G."""
    failures = []
    seen: dict[int, set[str]] = {}
    split: Counter = Counter()
    scalars = [G.elements[s] for s in G.scalars]
    expected_cache: dict[int, list[CycElt]] = {}
    for i, g in enumerate(G.elements):
        n = G.proj_order_of(i)
        c = c_value(g)
        if n not in expected_cache:
            expected_cache[n] = expected_c_values(n)
        if not any(c == e for e in expected_cache[n]):
            failures.append(f"element {i}: proj order {n}, c = {c!r}")
        for z in scalars:
            if c_value(z * g) != c:
                failures.append(f"element {i}: c changes under scalar {z.a!r}")
        label = _c_label(c)
        seen.setdefault(n, set()).add(label)
        if n == 5:
            split[label] += 1
    return BLReport(
        kind=G.kind,
        passed=not failures,
        n_elements=len(G),
        c_values={n: sorted(v) for n, v in seen.items()},
        order5_split=dict(split),
        failures=failures,
    )


def cyclic_subgroup_orders(kind: str) -> frozenset[int]:
    """Orders of cyclic subgroups of the projective image (= element orders).

    ``kind`` is a group kind or a projective type A4/S4/A5.
    """
    kind = TYPE_MODEL.get(kind, kind)
    G = build_group(kind)
    return frozenset(G.proj_orders)
