"""Asymptotic multiplier ideals, volumes and Izumi constants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .monomials import MonomialIdeal, colon, contains
from .newton import howald_multiplier_ideal, multiplicity
from .valuations import (
    Arc,
    ClosurePowers,
    GradedFamily,
    MonomialVal,
    Intersection,
    MonomialValuation,
    NonMonomialFamily,
    Powers,
    Product,
    Veronese,
)
from .values import Value, ValueLike, ceil_ratio, compare_values

__all__ = [
    "StabilizationFailed",
    "Stabilization",
    "ClosedForm",
    "VolumeEstimate",
    "stabilize_multiplier_ideal",
    "divisibility_base",
    "known_upper_bound",
    "asymptotic_multiplier_ideal",
    "arc_asymptotic_multiplier_ideal",
    "closed_form_jm",
    "delta_and_e",
    "volume_estimate",
    "p_volume_estimate",
    "exact_monomial_volume",
    "exact_volume",
    "izumi_constant",
    "multiplicity_volume_sequence",
    "colon_multiplicity_probe",
]

P_CAP = 256


class StabilizationFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class Stabilization:
    """Outcome of the doubling search.

    ``p`` is the first index at which the reported ideal appeared.
    ``certified`` means it met a known upper bound for ``j_m``; otherwise two
    successive computations agreed, which is evidence but not proof.
    """

    ideal: MonomialIdeal
    p: int
    chain: tuple[tuple[int, MonomialIdeal], ...]
    certified: bool = False


def divisibility_base(F: GradedFamily, m: ValueLike) -> int:
    """A ``p0`` for which ``a_{p0 m}`` has an integral Newton polyhedron.

    Exact for valuation families with rational weights and for powers; for
    products it is the lcm of the parts, for intersections only a heuristic.
    Irrational data give 1.
    """
    m = Value.of(m)
    if not m.is_rational:
        return 1
    m = m.rational
    if isinstance(F, MonomialVal):
        ws = F.valuation.weights
        if not all(w.is_rational for w in ws):
            return 1
        return math.lcm(*((m / w.rational).denominator for w in ws))
    if isinstance(F, (Powers, ClosurePowers)):
        return m.denominator
    if isinstance(F, Veronese):
        if not F.m0.is_rational:
            return 1
        return divisibility_base(F.family, m * F.m0.rational)
    if isinstance(F, (Product, Intersection)):
        return math.lcm(divisibility_base(F.first, m), divisibility_base(F.second, m))
    return 1


def known_upper_bound(F: GradedFamily, m: ValueLike) -> Optional[MonomialIdeal]:
    """An ideal known to contain ``j_m`` (and in fact equal to it), if any."""
    m = Value.of(m)
    if isinstance(F, MonomialVal):
        return closed_form_jm(F.valuation, m)
    if isinstance(F, (Powers, ClosurePowers)) and m.is_rational:
        return howald_multiplier_ideal(F.ideal, m.rational)
    if isinstance(F, Veronese) and isinstance(F.family, MonomialVal):
        return closed_form_jm(F.family.valuation, _veronese_index(F, m))
    return None


def _veronese_index(F: Veronese, m: Value) -> Value:
    if m.is_rational:
        return F.m0 * m.rational
    if F.m0.is_rational:
        return m * F.m0.rational
    raise TypeError("product of two irrational indices is outside the value group")


def stabilize_multiplier_ideal(F: GradedFamily, m: ValueLike, p_cap: int = P_CAP) -> Stabilization:
    """Compute ``J((1/p) a_{pm})`` for ``p = p0, 2 p0, 4 p0, ...``.

    ``p0`` comes from :func:`divisibility_base`.  The ideals increase along
    the chain.  The search stops when an ideal reaches a known upper bound for
    ``j_m``, or, when no bound is known, when two successive ideals agree.
    Plain doubling from ``p = 1`` can pause below the limit: weights
    ``(3/2, 3/2)`` at ``m = 7`` give equal ideals at ``p = 1, 2`` and a
    larger one at ``p = 4``.
    """
    if isinstance(F, Arc) or not F.is_monomial:
        raise NonMonomialFamily(f"{type(F).__name__} has no monomial multiplier ideals")
    m = Value.of(m)
    if compare_values(m, 0) <= 0:
        unit = MonomialIdeal.unit(F.n)
        return Stabilization(unit, 1, ((1, unit),), True)
    bound = known_upper_bound(F, m)
    base = divisibility_base(F, m)
    p = base if base <= p_cap else 1
    chain: list[tuple[int, MonomialIdeal]] = []
    while p <= p_cap:
        J = howald_multiplier_ideal(F.at(m * p), Fraction(1, p))
        if chain and not chain[-1][1] <= J:
            raise AssertionError(f"multiplier ideals failed to increase at p = {p}")
        chain.append((p, J))
        first = next(q for q, K in chain if K == J)
        if bound is not None:
            if not J <= bound:
                raise AssertionError(f"J((1/{p}) a) exceeds the upper bound")
            if J == bound:
                return Stabilization(J, first, tuple(chain), True)
        elif len(chain) > 1 and chain[-2][1] == J:
            return Stabilization(J, first, tuple(chain), False)
        p *= 2
    raise StabilizationFailed(f"no stable ideal found up to p = {p_cap}")


def asymptotic_multiplier_ideal(F: GradedFamily, m: ValueLike, p_cap: int = P_CAP) -> MonomialIdeal:
    return stabilize_multiplier_ideal(F, m, p_cap).ideal


def arc_asymptotic_multiplier_ideal(m: ValueLike) -> MonomialIdeal:
    """``j_m`` of the arc family is the unit ideal for every ``m``.

    ``a_{pm}`` contains the smooth curve ``y - p_{pm-1}(x)`` whose multiplier
    ideal at any coefficient ``1/p < 1`` is trivial; multiplier ideals grow
    with the ideal, so ``J((1/p) a_{pm}) = (1)``.
    """
    return MonomialIdeal.unit(2)


def _strict_ideal(v: MonomialValuation, t: Value) -> MonomialIdeal:
    """``(x^b : sum b_i weight_i > t)``."""
    n = v.n
    if compare_values(t, 0) < 0:
        return MonomialIdeal.unit(n)
    out: list[tuple[int, ...]] = []
    last = v.weights[-1]

    def walk(i: int, prefix: tuple[int, ...], partial: Value) -> None:
        if i == n - 1:
            rest = t - partial
            if compare_values(rest, 0) < 0:
                out.append(prefix + (0,))
                return
            k = ceil_ratio(rest, last)
            if compare_values(last * k, rest) == 0:
                k += 1
            out.append(prefix + (k,))
            return
        k = 0
        while True:
            val = partial + v.weights[i] * k
            walk(i + 1, prefix + (k,), val)
            if compare_values(val, t) > 0:
                break
            k += 1

    walk(0, (), Value())
    return MonomialIdeal.from_gens(out, n)


def closed_form_jm(v: MonomialValuation, m: ValueLike) -> MonomialIdeal:
    """``j_m = (x^b : sum (b_i + 1) weight_i > m)``."""
    e = sum(v.weights, Value())
    return _strict_ideal(v, Value.of(m) - e)


def delta_and_e(v: MonomialValuation) -> tuple[tuple[int, ...], Value]:
    return (1,) * v.n, sum(v.weights, Value())


# ---------------------------------------------------------------------------
# volumes


@dataclass(frozen=True)
class ClosedForm:
    """``scale * prod(numer) / prod(denom)`` for positive values."""

    scale: Fraction
    numer: tuple[Value, ...] = ()
    denom: tuple[Value, ...] = ()

    @property
    def exact(self) -> Optional[Fraction]:
        if all(x.is_rational for x in self.numer + self.denom):
            out = self.scale
            for x in self.numer:
                out *= x.rational
            for x in self.denom:
                out /= x.rational
            return out
        return None

    def interval(self, max_width=Fraction(1, 10**20)) -> tuple[Fraction, Fraction]:
        exact = self.exact
        if exact is not None:
            return exact, exact
        width = Fraction(max_width)
        for _ in range(8):
            lo = hi = self.scale
            for x in self.numer:
                a, b = x.enclosure(width)
                lo, hi = lo * a, hi * b
            for x in self.denom:
                a, b = x.enclosure(width)
                if a <= 0:
                    raise ValueError("denominator enclosure touches zero")
                lo, hi = lo / b, hi / a
            if hi - lo <= max_width:
                break
            width /= 1000
        return lo, hi

    def approx(self, digits: int = 12) -> str:
        lo, hi = self.interval(Fraction(1, 10 ** (digits + 2)))
        mid = (lo + hi) / 2
        return f"{float(mid):.{digits}g}" if digits <= 17 else str(mid)

    def __float__(self) -> float:
        lo, hi = self.interval()
        return float((lo + hi) / 2)

    def __str__(self) -> str:
        if self.exact is not None:
            return str(self.exact)
        num = "*".join([str(self.scale)] * (self.scale != 1 or not self.numer) + [f"({x})" if x.terms and (x.rational or len(x.terms) > 1) else str(x) for x in self.numer])
        den = "*".join(f"({x})" if x.terms and (x.rational or len(x.terms) > 1) else str(x) for x in self.denom if x != Value(Fraction(1)))
        return f"{num}/{den}" if den else num

    def to_json(self):
        ex = self.exact
        if ex is not None:
            return {"exact": str(ex), "approx": self.approx()}
        return {"exact": str(self), "approx": self.approx()}


@dataclass
class VolumeEstimate:
    samples: list[tuple[Fraction, int, Fraction]]
    order: int
    exact: Optional[ClosedForm] = None
    tail_max: Fraction = field(init=False)

    def __post_init__(self):
        self.samples.sort(key=lambda s: s[0])
        k = len(self.samples)
        tail = self.samples[k - max(1, k // 3):] if k else []
        self.tail_max = max((s[2] for s in tail), default=Fraction(0))

    def to_tsv(self) -> str:
        rows = ["m\tlength\tnormalized"]
        for m, length, norm in self.samples:
            rows.append(f"{m}\t{length}\t{float(norm):.12f}")
        return "\n".join(rows)

    def summary(self) -> dict:
        out = {"order": self.order, "tail_max": f"{float(self.tail_max):.12f}", "samples": len(self.samples)}
        if self.exact is not None:
            out["exact"] = self.exact.to_json()
        return out


def exact_monomial_volume(v: MonomialValuation) -> ClosedForm:
    """``1 / prod(weights)``."""
    return ClosedForm(Fraction(1), (), tuple(v.weights))


def exact_volume(F: GradedFamily) -> Optional[ClosedForm]:
    """Closed-form volume when one is known, else ``None``."""
    if isinstance(F, MonomialVal):
        return exact_monomial_volume(F.valuation)
    if isinstance(F, Arc):
        return ClosedForm(Fraction(0))
    if isinstance(F, (Powers, ClosurePowers)):
        if F.ideal.has_finite_colength():
            return ClosedForm(Fraction(multiplicity(F.ideal)))
        return None
    if isinstance(F, Veronese):
        inner = exact_volume(F.family)
        if inner is None:
            return None
        return ClosedForm(inner.scale, inner.numer + (F.m0,) * F.n, inner.denom)
    return None


def _grid(m_max: ValueLike, count: int) -> list[Fraction]:
    m_max = Value.of(m_max)
    top = m_max.rational if m_max.is_rational else Fraction(m_max.floor())
    if count < 1 or top <= 0:
        raise ValueError("need a positive m_max and at least one sample")
    return [top * k / count for k in range(1, count + 1)]


def _estimate(F: GradedFamily, order: int, m_max: ValueLike, sample_count: int, grid: Optional[Sequence] = None) -> VolumeEstimate:
    ms = [Fraction(x) for x in grid] if grid is not None else _grid(m_max, sample_count)
    if isinstance(F, Arc):
        # Arc ideals are indexed by naturals
        ms = sorted({Fraction(max(1, math.ceil(m))) for m in ms})
    fact = math.factorial(order)
    samples = []
    for m in ms:
        length = F.length(m)
        samples.append((m, length, fact * length / m**order))
    return VolumeEstimate(samples, order)


def volume_estimate(F: GradedFamily, m_max: ValueLike, sample_count: int = 40, grid: Optional[Sequence] = None) -> VolumeEstimate:
    est = _estimate(F, F.n, m_max, sample_count, grid)
    est.exact = exact_volume(F)
    return est


def p_volume_estimate(F: GradedFamily, p: int, m_max: ValueLike, sample_count: int = 40, grid: Optional[Sequence] = None) -> VolumeEstimate:
    if not 1 <= p <= F.n:
        raise ValueError(f"p must lie in 1..{F.n}")
    est = _estimate(F, p, m_max, sample_count, grid)
    if p == F.n:
        est.exact = exact_volume(F)
    return est


# ---------------------------------------------------------------------------
# Izumi and multiplicities


def izumi_constant(v: MonomialValuation) -> tuple[int, int]:
    """``(p, C = 2p - 1)`` with ``p >= 2`` least such that ``j_p`` is proper."""
    if any(compare_values(a, 1) < 0 for a in v.weights):
        raise ValueError("rescale so that every weight is at least 1")
    zero = (0,) * v.n
    p = 2
    while contains(closed_form_jm(v, p), zero):
        p += 1
    return p, 2 * p - 1


def multiplicity_volume_sequence(F: GradedFamily, m_list: Sequence[ValueLike]) -> list[tuple[Value, int, Fraction]]:
    """``(m, e(a_m), e(a_m) / m^n)``; the ratio is exact for rational ``m``."""
    if not F.is_monomial:
        raise NonMonomialFamily(f"{type(F).__name__} does not produce monomial ideals")
    out = []
    for m in m_list:
        m = Value.of(m)
        e = multiplicity(F.at(m))
        if not m.is_rational:
            raise ValueError("ratios need a rational index")
        out.append((m, e, Fraction(e) / m.rational ** F.n))
    return out


def colon_multiplicity_probe(v: MonomialValuation, m_list: Sequence[ValueLike]) -> list[tuple[Value, int, Fraction]]:
    """``(m, e(a_m : j_m), e(a_m : j_m) / m^n)``, an experimental sequence."""
    out = []
    for m in m_list:
        m = Value.of(m)
        a = MonomialVal(v).at(m)
        d = colon(a, closed_form_jm(v, m))
        e = multiplicity(d) if not d.is_unit else 0
        out.append((m, e, Fraction(e) / m.as_fraction() ** v.n))
    return out
