"""Verification suites and their reports.

Every suite returns a :class:`Report` whose cases are evaluated in a fixed
order; failing cases carry a witness that can be replayed through the library.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence

from .asymptotics import (
    ClosedForm,
    closed_form_jm,
    delta_and_e,
    exact_monomial_volume,
    exact_volume,
    izumi_constant,
    volume_estimate,
)
from .monomials import MonomialIdeal, Polynomial, contains, maximal_ideal, order_at_max_ideal
from .newton import multiplicity, rees_valuations
from .valuations import (
    Arc,
    ArcIdeal,
    ArcValuation,
    GradedFamily,
    Intersection,
    MonomialVal,
    MonomialValuation,
    Product,
    ZariskiValuation,
    arc_value,
    monomial_valuation_ideal,
    monomial_value,
    zariski_alpha_sequence,
    zariski_standard_basis_count,
)
from .values import Value, compare_values, nth_root_bounds

__all__ = [
    "Case",
    "Report",
    "verify_theorem_a",
    "verify_delta_bound",
    "verify_izumi",
    "verify_minkowski",
    "verify_rees_bound",
    "verify_arc_counterexample",
    "zariski_volume_report",
    "random_polynomial",
    "reciprocal_sum_enclosure",
    "IZUMI_NOTE",
]

STATUSES = ("pass", "fail", "skipped")

IZUMI_NOTE = (
    "direction checked: nu(f) <= C * ord(f). The displayed inequality of the "
    "source reads nu >= C w, but its proof by contradiction establishes <=; "
    "the proof's direction is what is verified here."
)


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Value):
        return str(x)
    if isinstance(x, (MonomialIdeal, Polynomial)):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass(frozen=True)
class Case:
    inputs: dict
    expected: Any
    actual: Any
    status: str
    witness: Any = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "fail" and self.witness is None:
            raise ValueError("a failing case needs a witness")

    def to_json(self) -> dict:
        out = {
            "inputs": _jsonable(self.inputs),
            "expected": _jsonable(self.expected),
            "actual": _jsonable(self.actual),
            "status": self.status,
        }
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


@dataclass
class Report:
    suite: str
    cases: list[Case] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, inputs: dict, expected, actual, ok: Optional[bool], witness=None) -> Case:
        status = "skipped" if ok is None else ("pass" if ok else "fail")
        c = Case(inputs, expected, actual, status, witness if status == "fail" or witness is not None else None)
        self.cases.append(c)
        return c

    @property
    def counts(self) -> dict[str, int]:
        return {s: sum(c.status == s for c in self.cases) for s in STATUSES}

    @property
    def passed(self) -> bool:
        return self.counts["fail"] == 0

    def failures(self) -> list[Case]:
        return [c for c in self.cases if c.status == "fail"]

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "notes": list(self.notes),
            "summary": self.counts,
            "cases": [c.to_json() for c in self.cases],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def to_tsv(self) -> str:
        rows = ["#\tstatus\tinputs\texpected\tactual"]
        for i, c in enumerate(self.cases):
            rows.append(
                "\t".join(
                    [
                        str(i),
                        c.status,
                        json.dumps(_jsonable(c.inputs), sort_keys=True),
                        json.dumps(_jsonable(c.expected), sort_keys=True),
                        json.dumps(_jsonable(c.actual), sort_keys=True),
                    ]
                )
            )
        k = self.counts
        rows.append(f"# {self.suite}: {k['pass']} pass, {k['fail']} fail, {k['skipped']} skipped")
        return "\n".join(rows)


def _first_outside(I: MonomialIdeal, J: MonomialIdeal) -> Optional[tuple[int, ...]]:
    """A generator of ``I`` not in ``J``, or None when ``I`` is inside ``J``."""
    for g in I.gens:
        if not contains(J, g):
            return g
    return None


def _frac(x) -> Fraction:
    return Fraction(x)


# ---------------------------------------------------------------------------
# Theorem A and the delta bound


def verify_theorem_a(
    v: MonomialValuation,
    m_list: Iterable,
    l_list: Iterable[int],
    e: Optional[Value] = None,
) -> Report:
    """``a_m^l ⊆ a_{ml} ⊆ a_{m-e}^l`` with ``e = sum of weights``.

    ``a_{m-e}`` is the unit ideal when ``m < e``.  Passing ``e`` overrides the
    default, which is how failing reports (and their witnesses) are exercised.
    """
    e = delta_and_e(v)[1] if e is None else Value.of(e)
    rep = Report("theorem-a")
    rep.notes.append(f"weights = {v}; e = {e}")
    for m in m_list:
        m = Value.of(m)
        a_m = monomial_valuation_ideal(v, m)
        shifted = m - e
        if compare_values(shifted, 0) < 0:
            a_shift = MonomialIdeal.unit(v.n)
        else:
            a_shift = monomial_valuation_ideal(v, shifted)
        for l in l_list:
            a_ml = monomial_valuation_ideal(v, m * l)
            left = a_m**l
            w1 = _first_outside(left, a_ml)
            rep.add(
                {"weights": str(v), "m": m, "l": l, "inclusion": "a_m^l <= a_ml"},
                True,
                w1 is None,
                w1 is None,
                None if w1 is None else {"exponent": list(w1), "in": "a_m^l", "not_in": "a_ml"},
            )
            right = a_shift**l
            w2 = _first_outside(a_ml, right)
            rep.add(
                {"weights": str(v), "m": m, "l": l, "inclusion": "a_ml <= a_(m-e)^l"},
                True,
                w2 is None,
                w2 is None,
                None if w2 is None else {"exponent": list(w2), "in": "a_ml", "not_in": "a_(m-e)^l", "e": e},
            )
    return rep


def verify_delta_bound(v: MonomialValuation, m_list: Iterable) -> Report:
    """``x^delta * j_m ⊆ a_m`` with ``delta = (1, ..., 1)``."""
    delta, e = delta_and_e(v)
    rep = Report("delta")
    rep.notes.append(f"weights = {v}; delta = {list(delta)}; nu(delta) = {e}")
    for m in m_list:
        m = Value.of(m)
        j = closed_form_jm(v, m)
        a = monomial_valuation_ideal(v, m)
        bad = None
        for g in j.gens:
            shifted = tuple(x + d for x, d in zip(g, delta))
            if not contains(a, shifted):
                bad = shifted
                break
        rep.add(
            {"weights": str(v), "m": m, "j_m": j},
            True,
            bad is None,
            bad is None,
            None if bad is None else {"exponent": list(bad), "in": "delta*j_m", "not_in": "a_m"},
        )
    return rep


# ---------------------------------------------------------------------------
# Izumi


def random_polynomial(rng: random.Random, n: int = 2, max_degree: int = 12, max_terms: int = 6) -> Polynomial:
    """Nonzero polynomial, total degree <= max_degree, coefficients in ±1..±5."""
    coeffs: dict[tuple[int, ...], int] = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(0, max_degree)
        cuts = sorted(rng.randint(0, d) for _ in range(n - 1))
        e = tuple(b - a for a, b in zip([0] + cuts, cuts + [d]))
        coeffs[e] = rng.choice([-1, 1]) * rng.randint(1, 5)
    return Polynomial.from_dict(coeffs, n)


def verify_izumi(v: MonomialValuation, trial_count: int = 1000, seed: int = 0, l_max: int = 6) -> Report:
    """``nu(f) <= C ord(f)`` on random polynomials plus ``a_{p l} ⊆ m^l``."""
    p, C = izumi_constant(v)
    rep = Report("izumi")
    rep.notes.append(IZUMI_NOTE)
    rep.notes.append(f"weights = {v}; p = {p}; C = {C}; seed = {seed}")
    rng = random.Random(seed)
    for i in range(trial_count):
        f = random_polynomial(rng, v.n)
        nu = monomial_value(v, f)
        o = order_at_max_ideal(f)
        ok = compare_values(nu, C * o) <= 0
        rep.add(
            {"trial": i, "f": str(f)},
            f"nu <= {C}*ord",
            {"nu": nu, "ord": o},
            ok,
            None if ok else {"polynomial": f.to_json(), "nu": nu, "ord": o, "C": C},
        )
    mm = maximal_ideal(v.n)
    for l in range(1, l_max + 1):
        a = monomial_valuation_ideal(v, p * l)
        w = _first_outside(a, mm**l)
        rep.add(
            {"p": p, "l": l, "inclusion": "a_pl <= m^l"},
            True,
            w is None,
            w is None,
            None if w is None else {"exponent": list(w), "in": "a_pl", "not_in": "m^l"},
        )
    return rep


# ---------------------------------------------------------------------------
# root comparisons


def _root_interval(cf: ClosedForm, n: int, digits: int) -> tuple[Fraction, Fraction]:
    lo, hi = cf.interval(Fraction(1, 10 ** (digits + 2)))
    return nth_root_bounds(lo, n, digits)[0], nth_root_bounds(hi, n, digits)[1]


def _certified_le(lhs, rhs, digits: Sequence[int] = (20, 40, 80)) -> tuple[Optional[bool], tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """Decide ``lhs <= rhs`` where each side maps digits to an enclosure."""
    for d in digits:
        L, R = lhs(d), rhs(d)
        if L[1] <= R[0]:
            return True, L, R
        if L[0] > R[1]:
            return False, L, R
    return None, L, R


def verify_rees_bound(I: MonomialIdeal) -> Report:
    """``e(I)^(1/n) <= sum_i e_i vol(nu_i)^(1/n)`` over the Rees valuations."""
    n = I.n
    e = multiplicity(I)
    rees = rees_valuations(I)
    vols = [exact_monomial_volume(MonomialValuation.of(*w)) for w, _ in rees]
    rep = Report("rees")
    rep.notes.append(f"ideal = {I}; e = {e}; rees = {[(list(w), str(c)) for w, c in rees]}")
    inputs = {"ideal": I, "e": e, "rees": [{"weights": list(w), "e_i": c} for w, c in rees]}
    if len(rees) == 1:
        # single term: compare n-th powers exactly
        (w, c), vol = rees[0], vols[0].exact
        bound_pow = Fraction(c) ** n * vol
        ok = Fraction(e) <= bound_pow
        rep.add(
            inputs,
            f"e <= e_1^{n} vol = {bound_pow}",
            {"e": e, "bound^n": bound_pow, "equality": Fraction(e) == bound_pow},
            ok,
            None if ok else {"e": e, "bound^n": bound_pow},
        )
        return rep

    def lhs(d):
        return nth_root_bounds(Fraction(e), n, d)

    def rhs(d):
        lo = hi = Fraction(0)
        for (w, c), vol in zip(rees, vols):
            a, b = _root_interval(vol, n, d)
            lo += c * a
            hi += c * b
        return lo, hi

    ok, L, R = _certified_le(lhs, rhs)
    rep.add(
        inputs,
        "e^(1/n) <= bound",
        {"lhs": [float(L[0]), float(L[1])], "bound": [float(R[0]), float(R[1])]},
        bool(ok),
        None if ok else {"lhs_enclosure": [L[0], L[1]], "bound_enclosure": [R[0], R[1]], "undecided": ok is None},
    )
    return rep


def verify_minkowski(
    F: MonomialVal,
    G: MonomialVal,
    m_max=40,
    samples: int = 40,
    slack: Fraction = Fraction(1, 50),
) -> Report:
    """``vol(F∩G)^(1/n) <= vol(FG)^(1/n) <= vol(F)^(1/n) + vol(G)^(1/n)``.

    The left inequality is checked sample by sample on lengths, which is
    exact since ``a_m b_m ⊆ a_m ∩ b_m``; the right one compares the sampled
    limsup of ``vol(FG)`` against certified root enclosures with ``slack``.
    """
    if F.n != G.n:
        raise ValueError("families live in different rings")
    n = F.n
    vf, vg = exact_volume(F), exact_volume(G)
    if vf is None or vg is None:
        raise ValueError("component volumes need closed forms")
    rep = Report("minkowski")
    rep.notes.append(f"F = {F.valuation}; G = {G.valuation}; vol F = {vf}; vol G = {vg}")
    prod = volume_estimate(Product(F, G), m_max, samples)
    inter = volume_estimate(Intersection(F, G), m_max, samples)
    for (m, lp, _), (_, li, _) in zip(prod.samples, inter.samples):
        ok = li <= lp
        rep.add(
            {"m": m, "inequality": "len(R/(a_m ∩ b_m)) <= len(R/a_m b_m)"},
            True,
            {"intersection": li, "product": lp},
            ok,
            None if ok else {"m": m, "intersection": li, "product": lp},
        )
    s = prod.tail_max
    factor = 1 + slack

    def lhs(d):
        return nth_root_bounds(s, n, d)

    def rhs(d):
        a, b = _root_interval(vf, n, d)
        c, e = _root_interval(vg, n, d)
        return factor * (a + c), factor * (b + e)

    ok, L, R = _certified_le(lhs, rhs)
    rep.add(
        {"inequality": "vol(FG)^(1/n) <= vol(F)^(1/n) + vol(G)^(1/n)", "slack": slack, "m_max": prod.samples[-1][0]},
        f"<= {float(R[0] / factor):.6f} (+{float(slack):.0%})",
        {"sampled_vol_FG": float(s), "root": float(L[0])},
        bool(ok),
        None if ok else {"sampled_vol_FG": s, "bound_enclosure": [R[0], R[1]], "undecided": ok is None},
    )
    return rep


# ---------------------------------------------------------------------------
# the arc and Zariski examples


def verify_arc_counterexample(depth: int = 50, witness_range: Sequence[int] = range(3, 11)) -> Report:
    """Lengths ``m``, order-one elements of ``a_m``, 1-volume 1, volume 0."""
    if depth < 6:
        raise ValueError("depth must be at least 6")
    av = ArcValuation(max(64, depth))
    rep = Report("arc")
    rep.notes.append("a_m = (x^m, y - p_(m-1)(x)); no fixed e can satisfy a_ml <= a_(m-e)^l")
    for m in range(1, depth + 1):
        length = ArcIdeal(av, m).length()
        rep.add({"m": m, "check": "length"}, m, length, length == m, None if length == m else {"m": m, "length": length})
        ok1 = Fraction(length, m) == 1
        rep.add(
            {"m": m, "check": "1-volume sample"},
            "1",
            Fraction(length, m),
            ok1,
            None if ok1 else {"m": m, "length": length},
        )
    for m in witness_range:
        if m > depth:
            continue
        h = av.generator(m)
        inside = ArcIdeal(av, m).contains(h)
        order = order_at_max_ideal(h)
        value = arc_value(av, h)
        ok = inside and order == 1 and value >= m
        rep.add(
            {"m": m, "check": "witness y - p_(m-1)(x)"},
            {"in_a_m": True, "ord": 1},
            {"in_a_m": inside, "ord": order, "value": value},
            ok,
            {"polynomial": h.to_json(), "note": "a_m is not inside m^2"} if ok else {"polynomial": h.to_json()},
        )
    vol = exact_volume(Arc(av))
    rep.add({"check": "volume closed form"}, "0", str(vol), vol.exact == 0, None if vol.exact == 0 else {"volume": str(vol)})
    return rep


def reciprocal_sum_enclosure(c: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Enclosure of ``1 / (1 + 1/c_0 + 1/(c_0 c_1) + ...)``.

    Uses the listed ``c``; the tail after the last listed term is at most the
    last term itself because every later ratio is at most 1/2.
    """
    terms = [Fraction(1)]
    for ci in c:
        if ci < 2:
            raise ValueError("each c_i must be at least 2")
        terms.append(terms[-1] / ci)
    partial = sum(terms, Fraction(0))
    return 1 / (partial + terms[-1]), 1 / partial


def zariski_volume_report(v: ZariskiValuation, count_depth: int = 3, capacity: int = 10**7) -> Report:
    """Alpha sequence, the bracket (1/2, 1) and the count sandwich."""
    if count_depth > 3:
        raise ValueError("count_depth is limited to 3")
    rep = Report("zariski")
    alpha = zariski_alpha_sequence(v)
    lo, hi = reciprocal_sum_enclosure(v.c)
    rep.notes.append(f"beta = {[str(b) for b in v.beta]}; c = {list(v.c)}")
    rep.notes.append(f"limit enclosure [{lo}, {hi}] ~ {float(lo):.9f}")
    for i, a in enumerate(alpha):
        rep.add({"i": i, "check": "alpha"}, "product formula", a, None)
    for i in range(len(alpha) - 1):
        ok = alpha[i + 1] < alpha[i]
        rep.add(
            {"i": i, "check": "alpha strictly decreasing"},
            f"alpha_{i + 1} < alpha_{i}",
            [alpha[i], alpha[i + 1]],
            ok,
            None if ok else {"alpha_i": alpha[i], "alpha_next": alpha[i + 1]},
        )
    ok = Fraction(1, 2) < lo and hi < 1
    rep.add({"check": "limit in (1/2, 1)"}, "(1/2, 1)", [lo, hi], ok, None if ok else {"enclosure": [lo, hi]})
    for t in range(min(count_depth, len(alpha) - 1) + 1):
        m = v.c[t] * v.beta[t]
        count = zariski_standard_basis_count(v, m, capacity)
        ratio = Fraction(2 * count) / m**2
        ok_upper = hi <= alpha[t]
        rep.add(
            {"t": t, "check": "limit <= alpha_t"},
            f"<= {alpha[t]}",
            [lo, hi],
            ok_upper,
            None if ok_upper else {"limit_enclosure": [lo, hi], "alpha_t": alpha[t]},
        )
        ok_lower = ratio <= lo
        rep.add(
            {"t": t, "m": m, "count": count, "check": "2*count/m^2 <= limit"},
            f"<= {float(lo):.9f}",
            {"ratio": ratio, "approx": f"{float(ratio):.9f}"},
            ok_lower,
            None if ok_lower else {"m": m, "count": count, "ratio": ratio, "limit_enclosure": [lo, hi], "alpha_t": alpha[t]},
        )
        # the ordering actually observed, recorded alongside
        observed = hi <= alpha[t] and alpha[t] <= ratio
        rep.add(
            {"t": t, "m": m, "check": "observed: limit <= alpha_t <= 2*count/m^2"},
            "informational",
            observed,
            None,
        )
    return rep
