"""Classification of weight-one newform data and census tables.

Two kinds of input are handled:

* exact-trace records (``NewformRecord``): a_p for many primes as elements of
  a fixed Q(zeta_M), plus the nebentypus as a Conrey character;
* census metadata (``MetadataRecord``): one row per newform with its
  projective type, character order and Hecke field degree.

The projective type is read off c_p = a_p^2 / chi(p), which takes the value
2 + z + 1/z for z a primitive root of unity of the order of the projective
Frobenius.  The values 4, 0, 1, 2 and (3 +- sqrt5)/2 belong to orders 1..5;
anything else means a projective element of order >= 6, i.e. a dihedral image.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_from_int_poly, gf_gcd, gf_pow_mod, gf_sub

from .cyclo import CycElt, Subfield, euler_phi, factor, fixing_group, named_surd, splits_completely
from .dirichlet import ConreyChar, char_value
from .rep_engine import SGN_DISTINCT, SGN_EQUAL, predicted_field, v2

__all__ = [
    "ClassificationResult",
    "MalformedRecord",
    "MetadataRecord",
    "NewformRecord",
    "PredictionCheck",
    "Tables",
    "build_tables",
    "check_prediction",
    "classify_type",
    "hecke_field_from_traces",
    "load_metadata",
    "load_newforms",
    "root_count_mod",
    "trace_field_report",
]

N_MIN = 20
# densities used for the confidence bounds: an S4 form shows c = 2 with
# probability 6/24 per prime, so missing it n times has probability (18/24)^n
_S4_MISS = Fraction(18, 24)
# under sgn_distinct, a prime in Q_{2^k} n (R1 u R3) has density >= 1/4 - 3/24
_BRANCH_MISS = Fraction(7, 8)


class MalformedRecord(ValueError):
    pass


# -- records ----------------------------------------------------------------------


@dataclass
class NewformRecord:
    label: str
    level: int
    char: ConreyChar
    ambient: int
    ap: dict[int, CycElt]
    field_poly: tuple[int, ...] | None = None  # ascending coefficients
    note: str | None = None

    def __post_init__(self):
        if self.char.modulus != self.level:
            raise MalformedRecord(f"{self.label}: character modulus {self.char.modulus} != level {self.level}")
        if self.char.parity != -1:
            raise MalformedRecord(f"{self.label}: nebentypus must be odd")
        for p, a in self.ap.items():
            if self.level % p == 0:
                raise MalformedRecord(f"{self.label}: stored prime {p} divides the level")
            if self.ambient % a.modulus:
                raise MalformedRecord(f"{self.label}: a_{p} is not in Q(zeta_{self.ambient})")

    @property
    def primes(self) -> list[int]:
        return sorted(self.ap)

    @classmethod
    def from_json(cls, obj: Mapping) -> "NewformRecord":
        try:
            M = int(obj["ambient"])
            ap = {}
            for p, v in obj["ap"].items():
                a = CycElt.from_json(v)
                ap[int(p)] = a.embed(M)
            fp = obj.get("field_poly")
            return cls(str(obj["label"]), int(obj["level"]), ConreyChar.from_json(obj["char"]), M, ap,
                       tuple(int(c) for c in fp) if fp is not None else None, obj.get("note"))
        except (KeyError, TypeError) as exc:
            raise MalformedRecord(f"bad newform record: {exc!r}") from None

    def to_json(self) -> dict:
        out = {
            "label": self.label,
            "level": self.level,
            "char": self.char.to_json(),
            "ambient": self.ambient,
            "ap": {str(p): self.ap[p].to_json() for p in self.primes},
        }
        if self.field_poly is not None:
            out["field_poly"] = list(self.field_poly)
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class MetadataRecord:
    label: str
    level: int
    char_order: int
    proj_type: str
    is_twist_minimal: bool
    level_is_squarefree: bool
    hecke_degree: int
    hecke_field_tag: str | None = None

    def __post_init__(self):
        if self.proj_type not in ("A4", "S4", "A5"):
            raise MalformedRecord(f"{self.label}: projective type {self.proj_type!r} is not exotic")
        if self.char_order % 2:
            raise MalformedRecord(f"{self.label}: odd character order {self.char_order}")

    @classmethod
    def from_json(cls, obj: Mapping) -> "MetadataRecord":
        try:
            return cls(str(obj["label"]), int(obj["level"]), int(obj["char_order"]), str(obj["proj_type"]),
                       bool(obj["twist_minimal"]), bool(obj["squarefree"]), int(obj["hecke_degree"]),
                       obj.get("hecke_field_tag"))
        except (KeyError, TypeError) as exc:
            raise MalformedRecord(f"bad metadata record: {exc!r}") from None

    def to_json(self) -> dict:
        out = {"label": self.label, "level": self.level, "char_order": self.char_order,
               "proj_type": self.proj_type, "twist_minimal": self.is_twist_minimal,
               "squarefree": self.level_is_squarefree, "hecke_degree": self.hecke_degree}
        if self.hecke_field_tag:
            out["hecke_field_tag"] = self.hecke_field_tag
        return out


def _read_jsonl(path) -> list[dict]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise MalformedRecord(f"{path}:{n}: {exc.msg}") from None
    return out


def load_newforms(path) -> list[NewformRecord]:
    return [NewformRecord.from_json(o) for o in _read_jsonl(path)]


def load_metadata(path) -> list[MetadataRecord]:
    return [MetadataRecord.from_json(o) for o in _read_jsonl(path)]


# -- classification ---------------------------------------------------------------


@dataclass
class ClassificationResult:
    label: str
    proj_type: str  # A4 | S4 | A5 | dihedral-suspected | inconclusive
    d: int
    n_primes: int
    confidence: Fraction
    predicted: Subfield | None = None
    branch: str | None = None
    branch_confidence: Fraction | None = None
    verified: str = "unchecked"  # pass | fail | unchecked
    notes: list[str] = field(default_factory=list)

    @property
    def classified(self) -> bool:
        return self.proj_type in ("A4", "S4", "A5")

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "proj_type": self.proj_type,
            "d": self.d,
            "n_primes": self.n_primes,
            "confidence": str(self.confidence),
            "predicted": None if self.predicted is None else self.predicted.normalized().to_json(),
            "predicted_name": None if self.predicted is None else self.predicted.describe(),
            "branch": self.branch,
            "branch_confidence": None if self.branch_confidence is None else str(self.branch_confidence),
            "verified": self.verified,
            "notes": self.notes,
        }


def _c_values(rec: NewformRecord) -> dict[int, CycElt]:
    out = {}
    for p in rec.primes:
        chi = char_value(rec.char, p)
        out[p] = rec.ap[p] * rec.ap[p] / chi
    return out


def _exotic_orders() -> dict[int, list[CycElt]]:
    s5 = named_surd("sqrt5")
    half = Fraction(1, 2)
    return {1: [CycElt.rational(4)], 2: [CycElt.rational(0)], 3: [CycElt.rational(1)],
            4: [CycElt.rational(2)], 5: [(3 + s5) * half, (3 - s5) * half]}


def _proj_order_of_c(c: CycElt, table) -> int | None:
    for n, vals in table.items():
        if any(c == v for v in vals):
            return n
    return None


def _infer_branch(rec: NewformRecord, orders: Mapping[int, int]) -> tuple[str, Fraction, list[int]]:
    """S4 refinement branch from data.

    sgn(Frob_p) is known when the projective order is 1, 3 (sgn +1) or 4
    (sgn -1); chi^(d/2)(p) = -1 exactly when p is in Q_{2^k}.  One prime where
    they disagree proves sgn_distinct; otherwise sgn_equal is reported with
    confidence 1 - (7/8)^n over the n primes where sgn is known.
    """
    d = rec.char.order
    witnesses, n_known = [], 0
    for p, n in orders.items():
        if n == 2:
            continue
        n_known += 1
        sgn = -1 if n == 4 else 1
        chi_half = -1 if (rec.char.exponent(p) * (d // 2)) % 1 == Fraction(1, 2) else 1
        if chi_half != sgn:
            witnesses.append(p)
    if witnesses:
        return SGN_DISTINCT, Fraction(1), witnesses
    return SGN_EQUAL, 1 - _BRANCH_MISS ** n_known, []


def classify_type(rec: NewformRecord, n_min: int = N_MIN) -> ClassificationResult:
    """Projective type from the c_p fingerprints, with the predicted Hecke field."""
    table = _exotic_orders()
    cs = _c_values(rec)
    orders: dict[int, int] = {}
    outside = []
    for p, c in cs.items():
        n = _proj_order_of_c(c, table)
        if n is None:
            outside.append(p)
        else:
            orders[p] = n
    d = rec.char.order
    n = len(cs)
    res = ClassificationResult(rec.label, "inconclusive", d, n, Fraction(0))
    seen = set(orders.values())
    if outside:
        res.proj_type = "dihedral-suspected"
        res.confidence = Fraction(1)
        res.notes.append(f"c_p outside the exotic values at p = {outside[:5]}")
        return res
    if 5 in seen and 4 in seen:
        res.notes.append("c-values of projective orders 4 and 5 both occur")
        return res
    if 5 in seen:
        res.proj_type, res.confidence = "A5", Fraction(1)
    elif 4 in seen:
        res.proj_type, res.confidence = "S4", Fraction(1)
    elif n >= n_min:
        res.proj_type = "A4"
        res.confidence = 1 - _S4_MISS ** n
        res.notes.append("A4 bound assumes equidistributed Frobenius (heuristic)")
    else:
        res.notes.append(f"only {n} primes; need {n_min} to call A4")
        return res
    if res.proj_type != "A5":
        res.notes.append("dihedral images with the same small rotation orders are not excluded by c-values")
    if d % 2:
        res.notes.append(f"character order {d} is odd")
        return res
    if res.proj_type == "S4" and v2(d) <= 2:
        res.branch, res.branch_confidence, witnesses = _infer_branch(rec, orders)
        if witnesses:
            res.notes.append(f"sgn_distinct witnessed at p = {witnesses[:5]}")
    res.predicted = predicted_field(res.proj_type, d, res.branch)
    return res


# -- fields from data --------------------------------------------------------------


def hecke_field_from_traces(rec: NewformRecord, primes: Iterable[int] | None = None) -> Subfield:
    """Q(a_p : p stored), a subfield of Q(zeta_ambient) and a lower bound for K_f."""
    ps = rec.primes if primes is None else list(primes)
    return fixing_group([rec.ap[p] for p in ps], rec.ambient)


def trace_field_report(rec: NewformRecord) -> tuple[Subfield, bool]:
    """The trace field and whether it was already reached by the first 75% of primes."""
    ps = rec.primes
    full = hecke_field_from_traces(rec, ps)
    prefix = hecke_field_from_traces(rec, ps[: (3 * len(ps)) // 4])
    return full, prefix == full


def root_count_mod(poly: Iterable[int], q: int) -> int:
    """Number of distinct roots of an integer polynomial (ascending) in F_q."""
    f = gf_from_int_poly(list(reversed(list(poly))), q)
    if len(f) <= 1:
        return 0
    x = [1, 0]
    xq = gf_pow_mod(x, q, f, q, ZZ)
    g = gf_gcd(f, gf_sub(xq, x, q, ZZ), q, ZZ)
    return len(g) - 1


@dataclass
class PredictionCheck:
    label: str
    status: str  # pass | fail
    trace_field: Subfield
    predicted: Subfield
    stable: bool
    splitting_checked: int = 0
    corroborated: bool | None = None
    detail: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "status": self.status,
            "trace_field": self.trace_field.normalized().to_json(),
            "predicted": self.predicted.normalized().to_json(),
            "stable": self.stable,
            "splitting_checked": self.splitting_checked,
            "corroborated": self.corroborated,
            "detail": self.detail,
        }


def _splitting_law(rec: NewformRecord, F: Subfield, n_primes: int, detail: list[str]) -> tuple[int, bool]:
    poly = rec.field_poly
    deg = len(poly) - 1
    if deg != F.degree:
        detail.append(f"field_poly has degree {deg}, predicted field has degree {F.degree}")
        return 0, False
    x = sympy.Symbol("x")
    disc = int(sympy.discriminant(sympy.Poly(list(reversed(poly)), x)))
    bad = rec.level * F.conductor * (disc or 1) * poly[-1]
    checked = 0
    q = 1
    while checked < n_primes:
        q = int(sympy.nextprime(q))
        if bad % q == 0:
            continue
        checked += 1
        split = root_count_mod(poly, q) == deg
        if split != splits_completely(F, q):
            detail.append(f"splitting law differs at q = {q}")
            return checked, False
    return checked, True


def check_prediction(rec: NewformRecord, res: ClassificationResult, n_split: int = 500) -> PredictionCheck:
    """Compare the stored traces (and field_poly, if any) with the predicted field.

    The splitting-law comparison is a semidecision: agreement on the first
    ``n_split`` usable primes corroborates but does not prove equality.
    """
    if res.predicted is None:
        raise ValueError(f"{rec.label}: no prediction to check ({res.proj_type}, d = {res.d})")
    K, stable = trace_field_report(rec)
    P = res.predicted
    out = PredictionCheck(rec.label, "pass", K, P, stable)
    if K != P:
        out.status = "fail"
        out.detail.append(f"traces generate {K.describe()}, predicted {P.describe()}")
    if not stable:
        out.detail.append("trace field grew in the last quarter of primes")
    if rec.field_poly is not None:
        out.splitting_checked, out.corroborated = _splitting_law(rec, P, n_split, out.detail)
        if not out.corroborated:
            out.status = "fail"
    res.verified = out.status
    return out


# -- tables ------------------------------------------------------------------------

# column headers as printed in the published census; data may add columns
_COLUMNS = {
    "A4": [2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 48],
    "A5": [2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30],
    "S4k1": [2, 6, 10, 14, 18, 22, 26, 30, 58],
    "S4k2": [4, 12, 20, 28, 36, 44, 52, 60],
    "S4k3": [8, 16, 24, 32, 40, 48, 56, 64],
}
_TITLES = {
    "A4": "twist-minimal newforms of A4-type",
    "A5": "twist-minimal newforms of A5-type",
    "S4k1": "twist-minimal newforms of S4-type with ord_2(d) = 1",
    "S4k2": "twist-minimal newforms of S4-type with ord_2(d) = 2",
    "S4k3": "twist-minimal newforms of S4-type with ord_2(d) >= 3",
}
# Hecke-field alternatives per S4 table: (tag, name, degree as a function of d)
_S4_FIELDS = {
    "S4k1": [("zeta_d_sqrt-2", "Q(zeta_d, sqrt-2)", lambda d: 2 * euler_phi(d)),
             ("zeta_4d", "Q(zeta_4d)", lambda d: euler_phi(4 * d))],
    "S4k2": [("zeta_d", "Q(zeta_d)", lambda d: euler_phi(d)),
             ("zeta_2d", "Q(zeta_2d)", lambda d: euler_phi(2 * d))],
    "S4k3": [("zeta_2d", "Q(zeta_2d)", lambda d: euler_phi(2 * d))],
}


def _table_key(r: MetadataRecord) -> str:
    if r.proj_type != "S4":
        return r.proj_type
    k = v2(r.char_order)
    return "S4k1" if k == 1 else "S4k2" if k == 2 else "S4k3"


def _field_tag(r: MetadataRecord, key: str) -> str | None:
    if r.hecke_field_tag:
        return r.hecke_field_tag
    matches = [tag for tag, _, deg in _S4_FIELDS[key] if deg(r.char_order) == r.hecke_degree]
    return matches[0] if len(matches) == 1 else None


@dataclass
class Tables:
    level_bound: int
    tables: dict[str, dict]
    anomalies: list[str]

    def to_json(self) -> dict:
        return {"level_bound": self.level_bound, "tables": self.tables, "anomalies": self.anomalies}

    def count(self, key: str, row: str, d: int) -> int:
        t = self.tables[key]
        return t["rows"][row][t["columns"].index(d)]

    def to_text(self) -> str:
        """Aligned plain-text rendering of ``to_json``."""
        out = []
        for key, t in self.tables.items():
            out.append(f"{t['title']} (level <= {self.level_bound})")
            cols = t["columns"]
            names = list(t["rows"])
            w0 = max(len("d"), *(len(n) for n in names))
            widths = [max(len(str(c)), *(len(str(t["rows"][n][i])) for n in names)) for i, c in enumerate(cols)]
            out.append("  ".join(["d".ljust(w0)] + [str(c).rjust(w) for c, w in zip(cols, widths)]))
            for n in names:
                out.append("  ".join([n.ljust(w0)] + [str(v).rjust(w) for v, w in zip(t["rows"][n], widths)]))
            out.append("")
        if self.anomalies:
            out.append("anomalies:")
            out.extend(f"  {a}" for a in self.anomalies)
        return "\n".join(out).rstrip() + "\n"


def build_tables(records: Iterable[MetadataRecord], level_bound: int = 4000) -> Tables:
    """Counts of twist-minimal exotic newforms of level <= level_bound.

    A pure fold over the records: the output does not depend on their order.
    """
    counts: dict[tuple, int] = {}
    columns = {k: set(v) for k, v in _COLUMNS.items()}
    anomalies = []
    for r in sorted(records, key=lambda r: r.label):
        if not r.is_twist_minimal or r.level > level_bound:
            continue
        key = _table_key(r)
        columns[key].add(r.char_order)
        tag = None
        if key.startswith("S4"):
            tag = _field_tag(r, key)
            if tag is None:
                anomalies.append(f"{r.label}: Hecke degree {r.hecke_degree} fits no alternative for d = {r.char_order}")
                continue
        scopes = ["general level"] + (["square-free level"] if r.level_is_squarefree else [])
        for scope in scopes:
            counts[(key, scope, tag, r.char_order)] = counts.get((key, scope, tag, r.char_order), 0) + 1
    tables = {}
    for key in _COLUMNS:
        cols = sorted(columns[key])
        rows = {}
        fields = _S4_FIELDS.get(key, [(None, None, None)])
        for tag, name, _ in fields:
            for scope in ("general level", "square-free level"):
                row = scope if name is None else f"{scope}, Hecke field {name}"
                rows[row] = [counts.get((key, scope, tag, d), 0) for d in cols]
        tables[key] = {"title": _TITLES[key], "columns": cols, "rows": rows}
    return Tables(level_bound, tables, anomalies)


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factor(n))
