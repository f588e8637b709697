"""Concrete valuations on k[x_1..x_n] and graded families of ideals.

Three kinds of valuation are supported: weighted-order (monomial)
valuations with possibly irrational weights, the order of vanishing along
the analytic arc ``y = e^x - 1``, and the plane valuations defined by a
sequence of key-polynomial values with coprime denominators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterable, Optional, Sequence

from sympy import prime

from .monomials import (
    MonomialIdeal,
    Polynomial,
    ZeroPolynomial,
    intersect,
    minimalize,
    power,
    product,
)
from .newton import integral_closure
from .values import Value, ValueLike, ceil_ratio, compare_values

__all__ = [
    "DepthExceeded",
    "CapacityExceeded",
    "NonMonomialFamily",
    "MonomialValuation",
    "ArcValuation",
    "ArcIdeal",
    "ZariskiValuation",
    "ZariskiIdeal",
    "monomial_value",
    "monomial_valuation_ideal",
    "arc_value",
    "arc_ideal_membership",
    "zariski_standard_basis_count",
    "zariski_alpha_sequence",
    "GradedFamily",
    "Powers",
    "ClosurePowers",
    "MonomialVal",
    "Arc",
    "Zariski",
    "Veronese",
    "Product",
    "Intersection",
    "family_at",
]


class DepthExceeded(ValueError):
    pass


class CapacityExceeded(ValueError):
    pass


class NonMonomialFamily(TypeError):
    pass


# ---------------------------------------------------------------------------
# monomial valuations


@dataclass(frozen=True)
class MonomialValuation:
    """``nu(x_i) = weights[i]``; a polynomial's value is its least term value."""

    weights: tuple[Value, ...]

    def __post_init__(self):
        w = tuple(Value.of(a) for a in self.weights)
        object.__setattr__(self, "weights", w)
        if not w:
            raise ValueError("need at least one variable")
        for a in w:
            if compare_values(a, 0) <= 0:
                raise ValueError(f"weight {a} is not positive")

    @classmethod
    def of(cls, *weights: ValueLike) -> "MonomialValuation":
        return cls(tuple(Value.of(a) for a in weights))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def is_rational(self) -> bool:
        return all(a.is_rational for a in self.weights)

    @property
    def independent(self) -> bool:
        return all(a.independent for a in self.weights)

    def value_of_exponent(self, a: Sequence[int]) -> Value:
        return sum((w * k for w, k in zip(self.weights, a)), Value())

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.weights) + ")"


def monomial_value(v: MonomialValuation, f: Polynomial) -> Value:
    if f.is_zero:
        raise ZeroPolynomial("the zero polynomial has infinite value")
    best: Optional[Value] = None
    for e, _ in f.terms:
        val = v.value_of_exponent(e)
        if best is None or compare_values(val, best) < 0:
            best = val
    return best


def monomial_valuation_ideal(v: MonomialValuation, m: ValueLike) -> MonomialIdeal:
    """``a_m = (x^a : sum a_i * weight_i >= m)``."""
    m = Value.of(m)
    n = v.n
    if compare_values(m, 0) <= 0:
        return MonomialIdeal.unit(n)
    out: list[tuple[int, ...]] = []
    last = v.weights[-1]

    def walk(i: int, prefix: tuple[int, ...], partial: Value) -> None:
        if i == n - 1:
            rest = m - partial
            k = max(0, ceil_ratio(rest, last)) if compare_values(rest, 0) > 0 else 0
            out.append(prefix + (k,))
            return
        k = 0
        while True:
            val = partial + v.weights[i] * k
            walk(i + 1, prefix + (k,), val)
            if compare_values(val, m) >= 0:
                break
            k += 1

    walk(0, (), Value())
    return minimalize(out, n)


# ---------------------------------------------------------------------------
# arc valuation


def _exp_minus_one(N: int) -> list[Fraction]:
    """Coefficients of ``e^t - 1`` modulo ``t^N``."""
    out = [Fraction(0)] * N
    fact = 1
    for i in range(1, N):
        fact *= i
        out[i] = Fraction(1, fact)
    return out


def _series_mul(a: list[Fraction], b: list[Fraction], N: int) -> list[Fraction]:
    out = [Fraction(0)] * N
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j in range(N - i):
            if b[j]:
                out[i + j] += x * b[j]
    return out


def _substitute(f: Polynomial, ycurve: list[Fraction], N: int) -> list[Fraction]:
    """``f(t, ycurve(t))`` modulo ``t^N``."""
    maxb = max((e[1] for e, _ in f.terms), default=0)
    powers = [[Fraction(1)] + [Fraction(0)] * (N - 1)]
    for _ in range(maxb):
        powers.append(_series_mul(powers[-1], ycurve, N))
    out = [Fraction(0)] * N
    for (a, b), c in f.terms:
        if a >= N:
            continue
        pb = powers[b]
        for j in range(N - a):
            if pb[j]:
                out[a + j] += c * pb[j]
    return out


@dataclass(frozen=True)
class ArcValuation:
    """Order of vanishing along ``y = e^x - 1``, computed modulo ``t^depth``."""

    truncation_depth: int = 64
    series: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.truncation_depth < 2:
            raise ValueError("truncation depth must be at least 2")
        object.__setattr__(self, "series", tuple(_exp_minus_one(self.truncation_depth)))

    n = 2

    def curve_truncation(self, k: int) -> Polynomial:
        """``p_k(x) = x + x^2/2! + ... + x^k/k!``."""
        return Polynomial.from_dict({(i, 0): Fraction(1, math.factorial(i)) for i in range(1, k + 1)}, 2) if k >= 1 else Polynomial(2, ())

    def generator(self, m: int) -> Polynomial:
        """The non-monomial generator ``y - p_{m-1}(x)`` of ``a_m``."""
        return Polynomial.monomial((0, 1)) - self.curve_truncation(m - 1)


def arc_value(v: ArcValuation, f: Polynomial) -> int:
    if f.is_zero:
        raise ZeroPolynomial("the zero polynomial has infinite value")
    if f.n != 2:
        raise ValueError("the arc valuation lives on k[x, y]")
    N = v.truncation_depth
    s = _substitute(f, list(v.series), N)
    for i, c in enumerate(s):
        if c != 0:
            return i
    raise DepthExceeded(f"order of {f} along the arc is at least {N}")


def arc_ideal_membership(v: ArcValuation, f: Polynomial, m: int) -> bool:
    """``f in a_m``, i.e. ``f(x, p_{m-1}(x)) = 0 mod x^m``."""
    if m > v.truncation_depth:
        raise DepthExceeded(f"m = {m} exceeds truncation depth {v.truncation_depth}")
    if m <= 0:
        return True
    if f.is_zero:
        return True
    curve = [Fraction(0)] + [Fraction(1, math.factorial(i)) for i in range(1, m)]
    return not any(_substitute(f, curve, m))


@dataclass(frozen=True)
class ArcIdeal:
    """Symbolic handle for ``a_m = (x^m, y - p_{m-1}(x))`` of the arc valuation."""

    valuation: ArcValuation
    m: int

    @property
    def n(self) -> int:
        return 2

    def generators(self) -> list[Polynomial]:
        if self.m <= 0:
            return [Polynomial.monomial((0, 0))]
        return [Polynomial.monomial((self.m, 0)), self.valuation.generator(self.m)]

    def contains(self, f: Polynomial) -> bool:
        return arc_ideal_membership(self.valuation, f, self.m)

    def length(self) -> int:
        """``dim R/a_m``, the rank of ``R -> k[[t]]/(t^m)``.

        Monomials of degree ``>= m`` already lie in ``a_m``, so the images of
        the monomials of degree ``< m`` span the quotient.
        """
        m = self.m
        if m <= 0:
            return 0
        if m > self.valuation.truncation_depth:
            raise DepthExceeded(f"m = {m} exceeds truncation depth")
        curve = [Fraction(0)] + [Fraction(1, math.factorial(i)) for i in range(1, m)]
        # lazily: the rank routine stops once it is full
        rows = (
            _substitute(Polynomial.monomial((a, b)), curve, m) for b in range(m) for a in range(m - b)
        )
        return _rank(rows, m)

    def order(self) -> int:
        """Least order at the maximal ideal over the generators."""
        return min(min(sum(e) for e, _ in g.terms) for g in self.generators())


def _rank(rows: Iterable[list[Fraction]], ncols: int) -> int:
    pivots: dict[int, list[Fraction]] = {}
    for r in rows:
        r = list(r)
        for c in range(ncols):
            if r[c] == 0:
                continue
            if c in pivots:
                p = pivots[c]
                f = r[c] / p[c]
                r = [x - f * y for x, y in zip(r, p)]
            else:
                pivots[c] = r
                break
        if len(pivots) == ncols:
            break
    return len(pivots)


# ---------------------------------------------------------------------------
# key-polynomial (Zariski) plane valuations


@dataclass(frozen=True)
class ZariskiValuation:
    """Values ``beta_0, ..., beta_T`` of ``x = q_0, q_1, ..., q_T`` with ``nu(y) = 1``.

    ``c[i]`` is the denominator of ``beta[i]``; ``beta[i+1] > c[i] * beta[i]``
    and ``c[i]`` is coprime to ``c[0] * ... * c[i-1]``.
    """

    beta: tuple[Fraction, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        beta = tuple(Fraction(b) for b in self.beta)
        c = tuple(int(x) for x in self.c)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "c", c)
        if not beta or len(beta) != len(c):
            raise ValueError("beta and c must be non-empty and of equal length")
        if beta[0] <= 1:
            raise ValueError("beta_0 must exceed 1")
        prod = 1
        for i, (b, ci) in enumerate(zip(beta, c)):
            if b.denominator != ci:
                raise ValueError(f"c_{i} = {ci} is not the denominator of beta_{i} = {b}")
            if math.gcd(ci, prod) != 1:
                raise ValueError(f"c_{i} = {ci} is not coprime to the earlier denominators")
            if i + 1 < len(beta) and not beta[i + 1] > ci * b:
                raise ValueError(f"beta_{i + 1} must exceed c_{i} * beta_{i}")
            prod *= ci

    @classmethod
    def primes(cls, depth: int, beta0: Fraction = Fraction(3, 2)) -> "ZariskiValuation":
        """``c_i`` the i-th prime and ``beta_{i+1} = c_i beta_i + 1/c_{i+1}``."""
        beta0 = Fraction(beta0)
        beta = [beta0]
        c = [prime(1)]
        for i in range(depth):
            c.append(prime(i + 2))
            beta.append(c[i] * beta[i] + Fraction(1, c[i + 1]))
        return cls(tuple(beta), tuple(c))

    @property
    def depth(self) -> int:
        return len(self.beta) - 1

    n = 2


def zariski_standard_basis_count(v: ZariskiValuation, m, capacity: int = 10**7) -> int:
    """``dim k[x,y]/a_m``: tuples ``(a_{-1}, a_0..a_T)`` with ``a_j < c_j`` for
    ``j >= 0`` and ``a_{-1} + sum beta_j a_j < m``."""
    m = Fraction(m)
    if m <= 0:
        return 0
    T = v.depth
    if m > v.c[T] * v.beta[T]:
        raise DepthExceeded(
            f"m = {m} may need key polynomials beyond depth {T} (exact only up to {v.c[T] * v.beta[T]})"
        )
    used = [j for j in range(T + 1) if v.beta[j] < m]
    D = math.lcm(m.denominator, *(v.beta[j].denominator for j in used))
    tuples = math.prod(v.c[j] for j in used)
    if tuples > capacity or m * D > capacity * 10**5:
        raise CapacityExceeded(f"{tuples} tuples at scale {D}")
    M = int(m * D)
    # histogram of scaled sums sum beta_j a_j below M
    hist = {0: 1}
    for j in used:
        bj = int(v.beta[j] * D)
        nxt: dict[int, int] = {}
        for s, cnt in hist.items():
            for a in range(v.c[j]):
                t = s + a * bj
                if t >= M:
                    break
                nxt[t] = nxt.get(t, 0) + cnt
        hist = nxt
    # a_{-1} ranges over 0 <= a < (M - s) / D
    return sum(cnt * (-((s - M) // D)) for s, cnt in hist.items())


def zariski_alpha_sequence(v: ZariskiValuation) -> list[Fraction]:
    """``alpha_i = (1/beta_0) * prod_{j<=i} c_j beta_j / beta_{j+1}``, ``i < T``."""
    out = []
    acc = 1 / v.beta[0]
    for i in range(v.depth):
        acc = acc * v.c[i] * v.beta[i] / v.beta[i + 1]
        out.append(acc)
    return out


@dataclass(frozen=True)
class ZariskiIdeal:
    valuation: ZariskiValuation
    m: Fraction

    @property
    def n(self) -> int:
        return 2

    def length(self) -> int:
        return zariski_standard_basis_count(self.valuation, self.m)


# ---------------------------------------------------------------------------
# graded families


class GradedFamily:
    """A family ``m -> a_m`` with ``a_m a_l ⊆ a_{m+l}`` and ``a_0 = R``.

    ``index_kind`` is ``"integer"``, ``"rational"`` or ``"value"``.
    """

    n: int
    index_kind = "value"
    is_monomial = True

    def at(self, m: ValueLike):
        raise NotImplementedError

    def length(self, m: ValueLike) -> int:
        return self.at(m).length()


def _ceil_index(m: ValueLike) -> int:
    return max(0, Value.of(m).ceil())


@dataclass(frozen=True)
class Powers(GradedFamily):
    ideal: MonomialIdeal
    index_kind = "integer"

    @property
    def n(self) -> int:
        return self.ideal.n

    def at(self, m):
        return power(self.ideal, _ceil_index(m))


@dataclass(frozen=True)
class ClosurePowers(GradedFamily):
    ideal: MonomialIdeal
    index_kind = "integer"

    @property
    def n(self) -> int:
        return self.ideal.n

    def at(self, m):
        return integral_closure(power(self.ideal, _ceil_index(m)))


@dataclass(frozen=True)
class MonomialVal(GradedFamily):
    valuation: MonomialValuation

    @classmethod
    def of(cls, *weights: ValueLike) -> "MonomialVal":
        return cls(MonomialValuation.of(*weights))

    @property
    def n(self) -> int:
        return self.valuation.n

    def at(self, m):
        return monomial_valuation_ideal(self.valuation, m)


@dataclass(frozen=True)
class Arc(GradedFamily):
    valuation: ArcValuation = ArcValuation()
    index_kind = "integer"
    is_monomial = False

    @property
    def n(self) -> int:
        return 2

    def at(self, m):
        return ArcIdeal(self.valuation, _ceil_index(m))


@dataclass(frozen=True)
class Zariski(GradedFamily):
    valuation: ZariskiValuation
    index_kind = "rational"
    is_monomial = False

    @property
    def n(self) -> int:
        return 2

    def at(self, m):
        return ZariskiIdeal(self.valuation, Value.of(m).as_fraction())


@dataclass(frozen=True)
class Veronese(GradedFamily):
    """``l -> a_{m0 * l}``."""

    family: GradedFamily
    m0: Value

    def __post_init__(self):
        object.__setattr__(self, "m0", Value.of(self.m0))

    @property
    def n(self) -> int:
        return self.family.n

    @property
    def is_monomial(self) -> bool:
        return self.family.is_monomial

    def at(self, l):
        l = Value.of(l)
        if l.is_rational:
            return self.family.at(self.m0 * l.rational)
        if self.m0.is_rational:
            return self.family.at(l * self.m0.rational)
        raise TypeError("product of two irrational indices is outside the value group")


def _need_monomial(*fams: GradedFamily) -> None:
    for F in fams:
        if not F.is_monomial:
            raise NonMonomialFamily(f"{type(F).__name__} does not produce monomial ideals")
    if len({F.n for F in fams}) != 1:
        raise ValueError("families live in different rings")


@dataclass(frozen=True)
class Product(GradedFamily):
    first: GradedFamily
    second: GradedFamily

    def __post_init__(self):
        _need_monomial(self.first, self.second)

    @property
    def n(self) -> int:
        return self.first.n

    def at(self, m):
        return product(self.first.at(m), self.second.at(m))


@dataclass(frozen=True)
class Intersection(GradedFamily):
    first: GradedFamily
    second: GradedFamily

    def __post_init__(self):
        _need_monomial(self.first, self.second)

    @property
    def n(self) -> int:
        return self.first.n

    def at(self, m):
        return intersect(self.first.at(m), self.second.at(m))


def family_at(F: GradedFamily, m: ValueLike):
    if compare_values(Value.of(m), 0) < 0:
        raise ValueError("negative index")
    return F.at(m)
