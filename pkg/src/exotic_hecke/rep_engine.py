"""Synthetic twisted representations and the Hecke-field predictions they test.

A synthetic representation is the direct product B x C_m of a finite matrix
group B with a cyclic group, acting by rho(g, c) = zeta_m^c g.  Its
determinant character is chi(g, c) = det(g) zeta_m^(2c), the twist rule
det(rho x psi) = det(rho) psi^2.  Every pair (g, c) is treated as one
Frobenius class, so prime densities become exact proportions of pairs.

Character values are carried as integer exponents modulo a common denominator
``D``; chi(x) = exp(2 pi i e / D).
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

from .cyclo import CycElt, Subfield, fixing_group, kronecker, lcm, named_surd, units, zeta
from .exotic_groups import KINDS, PROJ_TYPE, MatGroup, Mat2, build_group, cyclic_subgroup_orders

__all__ = [
    "DensityReport",
    "SweepReport",
    "SyntheticRep",
    "Verdict",
    "allowed_squarefree_orders",
    "ap_field",
    "build_twist",
    "containment_checks",
    "densities",
    "case_formula_field",
    "elementwise_failures",
    "predicted_field",
    "refinement_branch",
    "refinement_check",
    "theorem_sweep",
    "trace_field",
    "verify_theorem",
]

# element proportions by projective order, and the sgn split of order 2 for S4
REFERENCE_DENSITIES = {
    "A4": {1: Fraction(1, 12), 2: Fraction(3, 12), 3: Fraction(8, 12)},
    "S4": {1: Fraction(1, 24), 2: Fraction(9, 24), 3: Fraction(8, 24), 4: Fraction(6, 24)},
    "A5": {1: Fraction(1, 60), 2: Fraction(15, 60), 3: Fraction(20, 60), 5: Fraction(24, 60)},
}
REFERENCE_R2_SPLIT = {"+": Fraction(3, 24), "-": Fraction(6, 24)}

SGN_EQUAL = "sgn_equal"
SGN_DISTINCT = "sgn_distinct"
BRANCHES = (SGN_EQUAL, SGN_DISTINCT)


def v2(n: int) -> int:
    k = 0
    while n and n % 2 == 0:
        n //= 2
        k += 1
    return k


class SyntheticRep:
    """rho = base x psi with psi of order m on the scalar factor.

    Elements are pairs ``(i, c)``: ``i`` indexes ``base.elements`` and ``c``
    runs over Z/m.  Matrices are only built on request.
    """

    def __init__(self, base: MatGroup, m: int):
        if m < 1:
            raise ValueError("twist order m must be >= 1")
        self.base = base
        self.m = m
        self.modulus = lcm(base.modulus, m)
        dets = base.det_exponents
        D = lcm(m, *(e.denominator for e in dets))
        self.D = D
        self._det_num = [e.numerator * (D // e.denominator) % D for e in dets]
        self._step = 2 * (D // m) % D
        self.d = D // gcd(D, self._step, *self._det_num)
        self._traces: list[CycElt] | None = None

    @property
    def kind(self) -> str:
        return self.base.kind

    @property
    def proj_type(self) -> str:
        return PROJ_TYPE[self.base.kind]

    def __len__(self):
        return len(self.base) * self.m

    def __repr__(self):
        return f"SyntheticRep({self.kind}, m={self.m}, d={self.d})"

    def elements(self):
        for i in range(len(self.base)):
            for c in range(self.m):
                yield (i, c)

    def _check(self, x) -> tuple[int, int]:
        i, c = x
        if not (0 <= i < len(self.base)):
            raise ValueError(f"{x!r} is not an element of {self!r}")
        return i, c % self.m

    def rho(self, x) -> Mat2:
        i, c = self._check(x)
        return (self.base.elements[i] * zeta(self.m, c)).embed(self.modulus)

    def base_trace(self, i: int) -> CycElt:
        if self._traces is None:
            self._traces = [g.trace().embed(self.modulus) for g in self.base.elements]
        return self._traces[i]

    def trace(self, x) -> CycElt:
        i, c = self._check(x)
        return self.base_trace(i) * zeta(self.m, c)

    def chi_num(self, x) -> int:
        """Numerator e of chi(x) = exp(2 pi i e / D)."""
        i, c = self._check(x)
        return (self._det_num[i] + self._step * c) % self.D

    def chi_exponent(self, x) -> Fraction:
        return Fraction(self.chi_num(x), self.D)

    def chi_value(self, x) -> CycElt:
        return zeta(self.D, self.chi_num(x))

    def chi_order(self, x) -> int:
        return self.D // gcd(self.D, self.chi_num(x))

    def proj_order(self, x) -> int:
        i, _ = self._check(x)
        return self.base.proj_order_of(i)

    def sgn(self, x) -> int:
        i, _ = self._check(x)
        return self.base.sgn_of(i)


@lru_cache(maxsize=512)
def build_twist(base_kind: str, m: int) -> SyntheticRep:
    """The twist of the fixed model of ``base_kind`` by a character of order m."""
    return SyntheticRep(build_group(base_kind), m)


# -- fields ---------------------------------------------------------------------


def ap_field(rep: SyntheticRep, x) -> Subfield:
    """Q(trace rho(x)), computed from the trace itself."""
    return fixing_group([rep.trace(x)], rep.modulus)


@lru_cache(maxsize=None)
def case_formula_field(proj_order: int, chi_exp: Fraction) -> Subfield:
    """The case formula for Q(a_p) from the projective order and chi(p).

    Built from congruence conditions only, so it is independent of the
    cyclotomic arithmetic used by ``ap_field``.  With chi(p) = exp(2 pi i r)
    and s = r/2, sqrt(chi(p)) = +-zeta^s generates Q(zeta_n0), n0 = denom(s).
    """
    s = Fraction(chi_exp) % 1 / 2
    n0 = s.denominator
    if proj_order in (1, 3):
        return Subfield.cyclotomic(n0)
    if proj_order == 2:
        return Subfield.rationals()
    if proj_order == 4:
        # sigma_t(sqrt2 zeta^s) = kron(8, t) zeta^((t-1)s) * sqrt2 zeta^s
        L = lcm(8, n0)
        H = [t for t in units(L)
             if (kronecker(8, t) == 1 and (t - 1) * s % 1 == 0)
             or (kronecker(8, t) == -1 and (t - 1) * s % 1 == Fraction(1, 2))]
        return Subfield(L, H)
    if proj_order == 5:
        return Subfield.quadratic(5).join(Subfield.cyclotomic(n0))
    raise ValueError(f"no case formula for projective order {proj_order}")


def trace_field(rep: SyntheticRep) -> Subfield:
    """Q of all traces of rho, by full enumeration of the image."""
    seen: dict = {}
    for i in range(len(rep.base)):
        t = rep.base_trace(i)
        seen.setdefault(t.key(), t)
    vals = [t * zeta(rep.m, c) for t in seen.values() for c in range(rep.m)]
    return fixing_group(vals, rep.modulus)


def predicted_field(proj_type: str, d: int, branch: str | None = None) -> Subfield:
    """Hecke field predicted from the projective type and the order d of chi."""
    proj_type = proj_type.upper()
    if d < 2 or d % 2:
        raise ValueError(f"d must be even and >= 2, got {d}")
    if proj_type == "A4":
        return Subfield.cyclotomic(2 * d)
    if proj_type == "A5":
        return Subfield.cyclotomic(2 * d).join(Subfield.quadratic(5))
    if proj_type != "S4":
        raise ValueError(f"unknown projective type {proj_type!r}")
    k = v2(d)
    if k >= 3:
        return Subfield.cyclotomic(2 * d)
    if branch not in BRANCHES:
        raise ValueError(f"S4 with ord_2(d) = {k} needs branch in {BRANCHES}, got {branch!r}")
    if k == 1:
        if branch == SGN_DISTINCT:
            return Subfield.cyclotomic(4 * d)
        return Subfield.cyclotomic(d).join(Subfield.quadratic(-8))
    return Subfield.cyclotomic(2 * d if branch == SGN_DISTINCT else d)


# -- densities and the S4 refinement ---------------------------------------------


@dataclass
class DensityReport:
    kind: str
    m: int
    d: int
    r_counts: dict[int, Fraction]
    r2_split: dict[str, Fraction] | None = None
    q_density: Fraction | None = None
    partition_checks: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.partition_checks.values())

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m,
            "d": self.d,
            "r_counts": {str(k): str(v) for k, v in sorted(self.r_counts.items())},
            "r2_split": None if self.r2_split is None else {k: str(v) for k, v in self.r2_split.items()},
            "q_density": None if self.q_density is None else str(self.q_density),
            "partition_checks": self.partition_checks,
        }


def _s4_sets(rep: SyntheticRep):
    """Element sets used by the S4 refinement, over all pairs of the rep."""
    k = v2(rep.d)
    half = rep.d // 2
    q_set, minus, chi_half_minus = set(), set(), set()
    for x in rep.elements():
        if rep.chi_order(x) % (2 ** k) == 0:
            q_set.add(x)
        if rep.sgn(x) == -1:
            minus.add(x)
        if rep.chi_num(x) * half % rep.D == rep.D // 2 and rep.D % 2 == 0:
            chi_half_minus.add(x)
    return q_set, minus, chi_half_minus


def densities(rep: SyntheticRep) -> DensityReport:
    n = len(rep)
    counts: Counter = Counter()
    for i in range(len(rep.base)):
        counts[rep.base.proj_order_of(i)] += rep.m
    r = {o: Fraction(c, n) for o, c in sorted(counts.items())}
    rep_out = DensityReport(rep.kind, rep.m, rep.d, r)
    checks = {"sum_to_one": sum(r.values()) == 1}
    if rep.proj_type == "S4":
        plus = sum(rep.m for i in range(len(rep.base))
                   if rep.base.proj_order_of(i) == 2 and rep.base.sgn_of(i) == 1)
        minus = sum(rep.m for i in range(len(rep.base))
                    if rep.base.proj_order_of(i) == 2 and rep.base.sgn_of(i) == -1)
        rep_out.r2_split = {"+": Fraction(plus, n), "-": Fraction(minus, n)}
        # sgn = +1 on R1, R2+, R3 and -1 on R2-, R4
        checks["sgn_decomposition"] = all(
            (rep.base.sgn_of(i) == 1) == (rep.base.proj_order_of(i) in (1, 3))
            for i in range(len(rep.base)) if rep.base.proj_order_of(i) != 2)
        if rep.d % 2 == 0:
            q_set, minus_set, chi_half_minus = _s4_sets(rep)
            rep_out.q_density = Fraction(len(q_set), n)
            checks["q_is_chi_half_minus_one"] = q_set == chi_half_minus
            branch = refinement_branch(rep)
            if branch == SGN_EQUAL:
                checks["q_equals_r2minus_r4"] = q_set == minus_set
            else:
                even_part = [x for x in q_set if rep.sgn(x) == 1]
                checks["quarter_density"] = Fraction(len(even_part), n) == Fraction(1, 4)
    elif rep.d % 2 == 0:
        k = v2(rep.d)
        rep_out.q_density = Fraction(sum(1 for x in rep.elements() if rep.chi_order(x) % 2 ** k == 0), n)
    rep_out.partition_checks = checks
    return rep_out


def refinement_check(rep: SyntheticRep) -> tuple[bool, bool]:
    """(direct, via sets) answers to "chi^(d/2) = sgn"; they must agree.

    Direct: chi(x)^(d/2) = sgn(x) for every element.
    Via sets: Q_{2^k} equals R_2^- u R_4 (the sgn = -1 elements), k = ord_2(d).
    """
    if rep.proj_type != "S4":
        raise TypeError(f"the refinement needs projective image S4, not {rep.proj_type}")
    if rep.d % 2:
        raise ValueError(f"d = {rep.d} is odd")
    half = rep.d // 2
    direct = True
    for x in rep.elements():
        e = rep.chi_num(x) * half % rep.D
        target = 0 if rep.sgn(x) == 1 else rep.D // 2
        if e != target:
            direct = False
            break
    k = v2(rep.d)
    q_set = {x for x in rep.elements() if rep.chi_order(x) % 2 ** k == 0}
    r2m_r4 = {x for x in rep.elements()
              if (rep.proj_order(x) == 2 and rep.sgn(x) == -1) or rep.proj_order(x) == 4}
    return direct, q_set == r2m_r4


def refinement_branch(rep: SyntheticRep) -> str:
    direct, via_sets = refinement_check(rep)
    if direct != via_sets:
        raise AssertionError(f"{rep!r}: direct test says {direct}, set identity says {via_sets}")
    return SGN_EQUAL if direct else SGN_DISTINCT


# -- verification -----------------------------------------------------------------


@dataclass
class Verdict:
    kind: str
    m: int
    d: int
    proj_type: str
    status: str  # pass | fail | out-of-hypothesis
    branch: str | None = None
    trace_field: Subfield | None = None
    predicted: Subfield | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "m": self.m, "d": self.d, "proj_type": self.proj_type,
               "status": self.status, "branch": self.branch}
        if self.trace_field is not None:
            out["trace_field"] = self.trace_field.normalized().to_json()
            out["trace_field_name"] = self.trace_field.describe()
        if self.predicted is not None:
            out["predicted"] = self.predicted.normalized().to_json()
        return out


def verify_theorem(rep: SyntheticRep) -> Verdict:
    if rep.d % 2:
        return Verdict(rep.kind, rep.m, rep.d, rep.proj_type, "out-of-hypothesis")
    branch = refinement_branch(rep) if rep.proj_type == "S4" else None
    K = trace_field(rep)
    P = predicted_field(rep.proj_type, rep.d, branch)
    return Verdict(rep.kind, rep.m, rep.d, rep.proj_type, "pass" if K == P else "fail", branch, K, P)


def elementwise_failures(rep: SyntheticRep) -> tuple[int, list[str]]:
    """Compare ap_field with the case formula on every element.

    Elements are grouped by (base trace, det, projective order, c); the trace
    field and the formula depend only on that data.  Returns the number of
    distinct checks and the failures.
    """
    groups: dict = {}
    for i in range(len(rep.base)):
        key = (rep.base_trace(i).key(), rep._det_num[i], rep.base.proj_order_of(i))
        groups.setdefault(key, i)
    failures = []
    n = 0
    for i in groups.values():
        for c in range(rep.m):
            x = (i, c)
            n += 1
            got = ap_field(rep, x)
            want = case_formula_field(rep.proj_order(x), rep.chi_exponent(x))
            if got != want:
                failures.append(f"{rep.kind} m={rep.m} element {x}: Q(a_p) = {got!r}, formula gives {want!r}")
    return n, failures


def containment_checks(rep: SyntheticRep, K: Subfield | None = None) -> dict[str, bool]:
    """Lower bounds used inside the proofs, checked on the trace field."""
    if rep.d % 2:
        return {}
    K = K or trace_field(rep)
    out = {}
    if rep.proj_type == "A5":
        out["sqrt5_in_K"] = K.contains(named_surd("sqrt5"))
    if rep.proj_type == "S4":
        d_odd = rep.d // 2 ** v2(rep.d)
        out[f"zeta_{d_odd}_in_K"] = K.contains(zeta(d_odd))
    return out


def allowed_squarefree_orders(proj_type: str) -> frozenset[int]:
    """Possible orders of chi for square-free level.

    Im chi is generated by inertia images, each cyclic of an order occurring
    in the projective image, so |Im chi| is an lcm of such orders; it is even
    because chi is odd.  For A4 some inertia image maps onto the cubic
    quotient, so 3 must divide the order.
    """
    orders = sorted(cyclic_subgroup_orders(proj_type.upper()))
    lcms = {lcm(*sub) for r in range(1, len(orders) + 1) for sub in combinations(orders, r)}
    out = {n for n in lcms if n % 2 == 0}
    if proj_type.upper() == "A4":
        out = {n for n in out if n % 3 == 0}
    return frozenset(out)


# -- sweep ------------------------------------------------------------------------

# (projective type, d, branch) pairs the sweep must realize
REQUIRED_COVERAGE = (
    ("A4", 2, None), ("A4", 6, None), ("A4", 12, None),
    ("A5", 2, None), ("A5", 10, None),
    ("S4", 2, SGN_DISTINCT), ("S4", 4, SGN_DISTINCT),
    ("S4", 2, SGN_EQUAL), ("S4", 4, SGN_EQUAL),
)


def _sweep_one(task: tuple[str, int, bool]) -> dict:
    kind, m, with_elementwise = task
    rep = build_twist(kind, m)
    v = verify_theorem(rep)
    out = {"verdict": v.to_json(), "refinement": None, "elementwise": None, "containment": {}, "densities": True}
    if rep.proj_type == "S4" and rep.d % 2 == 0:
        direct, via_sets = refinement_check(rep)
        out["refinement"] = {"direct": direct, "via_sets": via_sets}
    if v.status != "out-of-hypothesis":
        out["containment"] = containment_checks(rep, v.trace_field)
        out["densities"] = densities(rep).passed
    if with_elementwise:
        n, fails = elementwise_failures(rep)
        out["elementwise"] = {"checked": n, "failures": fails}
    return out


@dataclass
class SweepReport:
    results: list[dict]
    max_twist: int
    kinds: tuple[str, ...]

    @property
    def verdicts(self) -> list[dict]:
        return [r["verdict"] for r in self.results]

    def realized(self) -> set[tuple[str, int, str | None]]:
        return {(v["proj_type"], v["d"], v["branch"]) for v in self.verdicts if v["status"] == "pass"}

    def missing_coverage(self) -> list[str]:
        got = self.realized()
        missing = [f"{t} d={d}" + (f" {b}" if b else "") for t, d, b in REQUIRED_COVERAGE if (t, d, b) not in got]
        if not any(t == "S4" and v2(d) >= 3 for t, d, _ in got):
            missing.append("S4 with ord_2(d) >= 3")
        return missing

    def coverage(self) -> dict[str, list]:
        """Even d values realized per base kind, and per (type, branch)."""
        per_kind: dict[str, set] = {}
        for v in self.verdicts:
            if v["status"] != "out-of-hypothesis":
                per_kind.setdefault(v["kind"], set()).add(v["d"])
        return {k: sorted(s) for k, s in sorted(per_kind.items())}

    @property
    def failures(self) -> list[dict]:
        return [v for v in self.verdicts if v["status"] == "fail"]

    @property
    def refinement_disagreements(self) -> list[dict]:
        return [r["verdict"] for r in self.results
                if r["refinement"] and r["refinement"]["direct"] != r["refinement"]["via_sets"]]

    @property
    def elementwise_failures(self) -> list[str]:
        return [f for r in self.results if r["elementwise"] for f in r["elementwise"]["failures"]]

    @property
    def elementwise_checked(self) -> int:
        return sum(r["elementwise"]["checked"] for r in self.results if r["elementwise"])

    @property
    def containment_failures(self) -> list[str]:
        return [f"{r['verdict']['kind']} m={r['verdict']['m']}: {name}"
                for r in self.results for name, ok in r["containment"].items() if not ok]

    @property
    def density_failures(self) -> list[str]:
        return [f"{r['verdict']['kind']} m={r['verdict']['m']}" for r in self.results if not r["densities"]]

    @property
    def passed(self) -> bool:
        return not (self.failures or self.refinement_disagreements or self.elementwise_failures
                    or self.containment_failures or self.density_failures or self.missing_coverage())


def theorem_sweep(max_twist: int = 60, kinds=KINDS, workers: int | None = 1,
                  elementwise: bool = True) -> SweepReport:
    """Verify every (kind, m) with m <= max_twist.

    ``workers`` > 1 uses a process pool; None means one per CPU.  Results are
    sorted by (kind, m), so the report does not depend on scheduling.
    """
    tasks = [(k, m, elementwise) for k in kinds for m in range(1, max_twist + 1)]
    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_one, tasks, chunksize=4))
    else:
        results = [_sweep_one(t) for t in tasks]
    order = {k: n for n, k in enumerate(kinds)}
    results.sort(key=lambda r: (order[r["verdict"]["kind"]], r["verdict"]["m"]))
    return SweepReport(results, max_twist, tuple(kinds))
