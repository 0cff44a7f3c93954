"""Dirichlet characters in the Conrey parametrization.

chi_N(n, m) is the product over p^e || N of the local characters

* odd p:  exp(2 pi i log_g(n) log_g(m) / phi(p^e)), with g the smallest
  positive primitive root mod p^e;
* p = 2, e >= 3: write n = eps(n) 5^a(n) mod 2^e, then
  exp(2 pi i ((1 - eps(n))(1 - eps(m))/8 + a(n) a(m) / 2^(e-2)));
* p = 2, e = 2: the same formula without the 5-part; e = 1: trivial.

Values are handled as exponents r in Q/Z (chi(m) = exp(2 pi i r)) and turned
into ``CycElt`` roots of unity only on request.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd

from .cyclo import CycElt, factor, lcm, units, zeta

__all__ = [
    "ConreyChar",
    "char_value",
    "character_of_order",
    "q_density_table",
    "membership_q",
    "q_set_density",
]


@lru_cache(maxsize=None)
def _primitive_root(q: int) -> int:
    phi = q // factor(q)[0][0] * (factor(q)[0][0] - 1)
    primes = [p for p, _ in factor(phi)]
    for g in range(2, q):
        if gcd(g, q) == 1 and all(pow(g, phi // r, q) != 1 for r in primes):
            return g
    return 1  # q = 2


@lru_cache(maxsize=None)
def _dlog_table(q: int) -> dict[int, int]:
    """Discrete logs mod an odd prime power q (base: smallest primitive root)."""
    g = _primitive_root(q)
    table = {}
    x = 1
    for k in range(q // factor(q)[0][0] * (factor(q)[0][0] - 1)):
        table[x] = k
        x = x * g % q
    return table


@lru_cache(maxsize=None)
def _two_adic_table(q: int) -> dict[int, tuple[int, int]]:
    """n mod 2^e -> (eps, a) with n = eps * 5^a, for q = 2^e >= 8."""
    table = {}
    x = 1
    for a in range(q // 4):
        table[x] = (1, a)
        table[(-x) % q] = (-1, a)
        x = x * 5 % q
    return table


def _local_exponent(q: int, p: int, e: int, n: int, m: int) -> Fraction:
    if q == 2 or q == 1:
        return Fraction(0)
    if p == 2:
        if e == 2:
            en = 1 if n % 4 == 1 else -1
            em = 1 if m % 4 == 1 else -1
            return Fraction((1 - en) * (1 - em), 8) % 1
        t = _two_adic_table(q)
        en, an = t[n % q]
        em, am = t[m % q]
        return (Fraction((1 - en) * (1 - em), 8) + Fraction(an * am, q // 4)) % 1
    logs = _dlog_table(q)
    phi = q // p * (p - 1)
    return Fraction(logs[n % q] * logs[m % q], phi) % 1


@dataclass(frozen=True)
class ConreyChar:
    """The Dirichlet character chi_N(n, .) with Conrey label N.n."""

    modulus: int
    conrey_index: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        n = self.conrey_index % self.modulus if self.modulus > 1 else 1
        if gcd(n, self.modulus) != 1:
            raise ValueError(f"Conrey index {self.conrey_index} is not coprime to {self.modulus}")
        object.__setattr__(self, "conrey_index", n)

    @classmethod
    def from_label(cls, label: str) -> "ConreyChar":
        try:
            N, n = label.split(".")
            return cls(int(N), int(n))
        except ValueError:
            raise ValueError(f"bad Conrey label {label!r}; expected 'N.n'") from None

    @property
    def label(self) -> str:
        return f"{self.modulus}.{self.conrey_index}"

    @cached_property
    def _parts(self) -> tuple[tuple[int, int, int], ...]:
        return tuple((p ** e, p, e) for p, e in factor(self.modulus))

    def exponent(self, m: int) -> Fraction:
        """r in [0, 1) with chi(m) = exp(2 pi i r)."""
        if gcd(m, self.modulus) != 1:
            raise ValueError(f"{m} is not coprime to the modulus {self.modulus}")
        r = Fraction(0)
        for q, p, e in self._parts:
            r += _local_exponent(q, p, e, self.conrey_index, m)
        return r % 1

    def value(self, m: int) -> CycElt:
        return char_value(self, m)

    @cached_property
    def order(self) -> int:
        d = 1
        for q, p, e in self._parts:
            n = self.conrey_index % q
            if q <= 2:
                continue
            if p == 2:
                if e == 2:
                    d = lcm(d, 1 if n == 1 else 2)
                else:
                    eps, a = _two_adic_table(q)[n]
                    d = lcm(d, 1 if eps == 1 else 2, (q // 4) // gcd(a, q // 4))
            else:
                phi = q // p * (p - 1)
                d = lcm(d, phi // gcd(_dlog_table(q)[n], phi))
        return d

    @cached_property
    def parity(self) -> int:
        if self.modulus <= 2:
            return 1
        return -1 if self.exponent(self.modulus - 1) == Fraction(1, 2) else 1

    @cached_property
    def conductor(self) -> int:
        f = 1
        for q, p, e in self._parts:
            n = self.conrey_index % q
            for c in range(e + 1):
                pc = p ** c
                if all(_local_exponent(q, p, e, n, m) == 0
                       for m in range(1, q, pc) if m % p):
                    f *= pc
                    break
        return f

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def __pow__(self, k: int) -> "ConreyChar":
        # Conrey labels are multiplicative: chi(n1) chi(n2) = chi(n1 n2)
        return ConreyChar(self.modulus, pow(self.conrey_index, k, self.modulus) if self.modulus > 1 else 1)

    def __mul__(self, other: "ConreyChar") -> "ConreyChar":
        if other.modulus != self.modulus:
            raise ValueError("characters must share a modulus")
        return ConreyChar(self.modulus, self.conrey_index * other.conrey_index % self.modulus)

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "conrey_index": self.conrey_index}

    @classmethod
    def from_json(cls, obj) -> "ConreyChar":
        return cls(int(obj["modulus"]), int(obj["conrey_index"]))


def char_value(chi: ConreyChar, p: int) -> CycElt:
    """chi(p) as a root of unity in Q(zeta_d), d the order of chi."""
    r = chi.exponent(p)
    d = chi.order
    return zeta(d, int(r * d))


def _order_of(r: Fraction) -> int:
    return r.denominator


def membership_q(chi: ConreyChar, m: int, p: int) -> bool:
    """p in Q_m(chi), i.e. m divides the order of chi(p)."""
    return _order_of(chi.exponent(p)) % m == 0


def q_set_density(chi: ConreyChar, m: int) -> Fraction:
    """Exact density of {t in (Z/N)^x : m | ord(chi(t))} by full enumeration."""
    us = units(chi.modulus) if chi.modulus > 1 else (1,)
    hits = sum(1 for t in us if _order_of(chi.exponent(t)) % m == 0)
    return Fraction(hits, len(us))


def character_of_order(d: int, parity: int | None = None, max_modulus: int = 10 ** 5) -> ConreyChar:
    """A character of order d on the smallest modulus admitting one.

    With ``parity`` given, only characters with chi(-1) = parity qualify.
    """
    for N in range(1, max_modulus):
        for n in units(N) if N > 1 else (1,):
            chi = ConreyChar(N, n)
            if chi.order == d and (parity is None or chi.parity == parity):
                return chi
    raise ValueError(f"no character of order {d} with modulus below {max_modulus}")


def q_density_table(max_d: int = 60) -> list[dict]:
    """For every even d <= max_d and every l^e || d: density of Q_{l^e} vs 1 - 1/l."""
    rows = []
    for d in range(2, max_d + 1, 2):
        chi = character_of_order(d)
        for ell, e in factor(d):
            got = q_set_density(chi, ell ** e)
            want = 1 - Fraction(1, ell)
            rows.append({"d": d, "char": chi.label, "l": ell, "e": e,
                         "density": got, "expected": want, "ok": got == want})
    return rows
