"""Elements of rank-one value groups with certified comparison.

A :class:`Value` is an exact rational plus a rational combination of named
irrational generators (``pi``, ``sqrt2``, or user supplied continued
fractions).  Comparison refines interval enclosures of the generators until
the sign of the difference is certified.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Optional, Union

__all__ = [
    "DEFAULT_DEPTH_CAP",
    "depth_limit",
    "ComparisonStalled",
    "DepthExhausted",
    "PI",
    "SQRT2",
    "RefinableReal",
    "Value",
    "ValueError_",
    "compare_values",
    "refine",
    "register_generator",
    "get_generator",
    "value",
    "parse_value",
    "nth_root_bounds",
    "ceil_ratio",
]

DEFAULT_DEPTH_CAP = 64
_DEPTH_CAP: ContextVar[int] = ContextVar("depth_cap", default=DEFAULT_DEPTH_CAP)


def _cap(depth_cap: Optional[int]) -> int:
    return _DEPTH_CAP.get() if depth_cap is None else depth_cap


@contextmanager
def depth_limit(cap: int):
    """Set the refinement depth cap used when none is passed explicitly."""
    if cap < 0:
        raise ValueError("depth cap must be nonnegative")
    token = _DEPTH_CAP.set(cap)
    try:
        yield cap
    finally:
        _DEPTH_CAP.reset(token)

Number = Union[int, Fraction]


class ValueError_(ValueError):
    """Base class for value-group errors."""


class DepthExhausted(ValueError_):
    pass


class ComparisonStalled(ValueError_):
    pass


def _convergents(quotients: tuple[int, ...]) -> list[Fraction]:
    h0, h1 = 1, quotients[0]
    k0, k1 = 0, 1
    out = [Fraction(h1, k1)]
    for a in quotients[1:]:
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        out.append(Fraction(h1, k1))
    return out


@dataclass(frozen=True)
class RefinableReal:
    """A positive real given by a finite continued-fraction table.

    ``interval_at(d)`` is the closed interval between the convergents ``d``
    and ``d + 1``; consecutive convergents bracket the true value, so the
    intervals are nested and shrink.  A table of length ``k`` supports depths
    ``0 .. k - 2``.
    """

    name: str
    quotients: tuple[int, ...]
    _conv: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.quotients) < 2:
            raise ValueError("continued fraction table needs at least two terms")
        if self.quotients[0] < 0 or any(a <= 0 for a in self.quotients[1:]):
            raise ValueError("partial quotients must be positive")
        object.__setattr__(self, "_conv", tuple(_convergents(self.quotients)))

    @property
    def max_depth(self) -> int:
        return len(self._conv) - 2

    def interval_at(self, depth: int) -> tuple[Fraction, Fraction]:
        if depth < 0:
            raise ValueError("depth must be non-negative")
        if depth > self.max_depth:
            raise DepthExhausted(
                f"{self.name}: table supports depth <= {self.max_depth}, asked {depth}"
            )
        a, b = self._conv[depth], self._conv[depth + 1]
        return (a, b) if a <= b else (b, a)

    def __str__(self) -> str:
        return self.name


# Partial quotients of pi: 50 terms, last enclosure width ~1e-55.
_PI_CF = (
    3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2, 1, 1, 2, 2, 2, 2, 1, 84, 2,
    1, 1, 15, 3, 13, 1, 4, 2, 6, 6, 99, 1, 2, 2, 6, 3, 5, 1, 1, 6, 8, 1, 7, 1,
    2, 3, 7,
)
# sqrt(2) = [1; 2, 2, ...]; 72 terms reach width ~1e-55.
_SQRT2_CF = (1,) + (2,) * 71

PI = RefinableReal("pi", _PI_CF)
SQRT2 = RefinableReal("sqrt2", _SQRT2_CF)

_REGISTRY: dict[str, RefinableReal] = {"pi": PI, "sqrt2": SQRT2}
# Generators whose Q-linear independence together with 1 is known.
_INDEPENDENT = {"pi", "sqrt2"}


def register_generator(name: str, quotients: Iterable[int], independent: bool = False) -> RefinableReal:
    """Register a user-supplied generator (e.g. from a config file)."""
    if name in ("unit", "1") or not name.isidentifier():
        raise ValueError(f"invalid generator name {name!r}")
    r = RefinableReal(name, tuple(int(a) for a in quotients))
    _REGISTRY[name] = r
    if independent:
        _INDEPENDENT.add(name)
    else:
        _INDEPENDENT.discard(name)
    return r


def get_generator(name: str) -> RefinableReal:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown generator {name!r}") from None


def refine(r: Union[RefinableReal, Number], max_width: Number, depth_cap: Optional[int] = None) -> tuple[Fraction, Fraction]:
    """First interval of ``r`` of width at most ``max_width``."""
    max_width = Fraction(max_width)
    if max_width <= 0:
        raise ValueError("max_width must be positive")
    if not isinstance(r, RefinableReal):
        q = Fraction(r)
        return q, q
    for d in range(min(_cap(depth_cap), r.max_depth) + 1):
        lo, hi = r.interval_at(d)
        if hi - lo <= max_width:
            return lo, hi
    raise DepthExhausted(f"{r.name}: cannot reach width {max_width} within the table/cap")


@dataclass(frozen=True)
class Value:
    """``rational + sum(coef * generator)`` with rational coefficients.

    ``terms`` is sorted by generator name and never stores a zero
    coefficient, so structural equality is coefficient equality.  Ordering
    operators go through :func:`compare_values`.
    """

    rational: Fraction = Fraction(0)
    terms: tuple[tuple[RefinableReal, Fraction], ...] = ()
    independent: bool = True

    # -- construction -------------------------------------------------
    @staticmethod
    def of(x: "ValueLike") -> "Value":
        if isinstance(x, Value):
            return x
        if isinstance(x, (int, Fraction)):
            return Value(Fraction(x))
        if isinstance(x, str):
            return parse_value(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Value")

    @staticmethod
    def generator(r: Union[RefinableReal, str], coef: Number = 1) -> "Value":
        if isinstance(r, str):
            r = get_generator(r)
        return _build(Fraction(0), {r: Fraction(coef)}, r.name in _INDEPENDENT)

    # -- inspection ---------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return not self.terms

    def as_fraction(self) -> Fraction:
        if self.terms:
            raise ValueError(f"{self} is not rational")
        return self.rational

    @property
    def basis(self) -> tuple[RefinableReal, ...]:
        return tuple(g for g, _ in self.terms)

    def coefficient(self, g: Union[RefinableReal, str]) -> Fraction:
        name = g if isinstance(g, str) else g.name
        for r, c in self.terms:
            if r.name == name:
                return c
        return Fraction(0)

    def interval(self, depth: int) -> tuple[Fraction, Fraction]:
        lo = hi = self.rational
        for g, c in self.terms:
            a, b = g.interval_at(min(depth, g.max_depth))
            if c > 0:
                lo += c * a
                hi += c * b
            else:
                lo += c * b
                hi += c * a
        return lo, hi

    def enclosure(self, max_width: Number = Fraction(1, 10**15), depth_cap: Optional[int] = None) -> tuple[Fraction, Fraction]:
        max_width = Fraction(max_width)
        if not self.terms:
            return self.rational, self.rational
        cap = min(_cap(depth_cap), max(g.max_depth for g, _ in self.terms))
        for d in range(cap + 1):
            lo, hi = self.interval(d)
            if hi - lo <= max_width:
                return lo, hi
        raise DepthExhausted(f"cannot enclose {self} to width {max_width}")

    def __float__(self) -> float:
        lo, hi = self.enclosure(Fraction(1, 10**18))
        return float((lo + hi) / 2)

    def approx(self, digits: int = 12) -> str:
        lo, hi = self.enclosure(Fraction(1, 10 ** (digits + 4)))
        mid = (lo + hi) / 2
        with localcontext() as ctx:
            ctx.prec = digits + 20
            d = Decimal(mid.numerator) / Decimal(mid.denominator)
            return str(round(d, digits))

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "ValueLike") -> "Value":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        coeffs = dict(self.terms)
        for g, c in other.terms:
            coeffs[g] = coeffs.get(g, Fraction(0)) + c
        return _build(self.rational + other.rational, coeffs, self.independent and other.independent)

    __radd__ = __add__

    def __neg__(self) -> "Value":
        return Value(-self.rational, tuple((g, -c) for g, c in self.terms), self.independent)

    def __sub__(self, other: "ValueLike") -> "Value":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "ValueLike") -> "Value":
        return Value.of(other) - self

    def __mul__(self, k: Number) -> "Value":
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        k = Fraction(k)
        return _build(self.rational * k, {g: c * k for g, c in self.terms}, self.independent)

    __rmul__ = __mul__

    def __truediv__(self, k: Number) -> "Value":
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(k))

    def scale(self, k: int) -> "Value":
        return self * k

    # -- ordering -----------------------------------------------------
    def __lt__(self, other):
        return compare_values(self, other) < 0

    def __le__(self, other):
        return compare_values(self, other) <= 0

    def __gt__(self, other):
        return compare_values(self, other) > 0

    def __ge__(self, other):
        return compare_values(self, other) >= 0

    def sign(self, depth_cap: Optional[int] = None) -> int:
        return compare_values(self, Value(), depth_cap)

    def ceil(self) -> int:
        """Smallest integer ``k`` with ``k >= self`` (certified)."""
        if not self.terms:
            return math.ceil(self.rational)
        lo, _ = self.enclosure(Fraction(1, 4))
        k = math.ceil(lo)
        while compare_values(k, self) < 0:
            k += 1
        while compare_values(k - 1, self) >= 0:
            k -= 1
        return k

    def floor(self) -> int:
        return -((-self).ceil())

    # -- text / serialization -----------------------------------------
    def __str__(self) -> str:
        parts = []
        if self.rational != 0 or not self.terms:
            parts.append(str(self.rational))
        for g, c in self.terms:
            if c == 1:
                s = g.name
            elif c == -1:
                s = f"-{g.name}"
            else:
                s = f"{c}*{g.name}" if c.denominator == 1 else f"({c})*{g.name}"
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        coeffs = [self.rational] + [c for _, c in self.terms]
        return {
            "coeffs": [_frac_json(c) for c in coeffs],
            "basis": ["unit"] + [g.name for g, _ in self.terms],
            "approx": self.approx(12),
        }


ValueLike = Union[Value, int, Fraction, str]


def _frac_json(c: Fraction):
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _build(rational: Fraction, coeffs: dict, independent: bool) -> Value:
    terms = tuple(sorted(((g, c) for g, c in coeffs.items() if c != 0), key=lambda t: t[0].name))
    names = [g.name for g, _ in terms]
    if len(set(names)) != len(names):
        raise ValueError_("distinct generators share a name")
    # independence is vacuous once no irrational generator remains
    return Value(Fraction(rational), terms, independent or not terms)


def _coerce(x) -> Value:
    if isinstance(x, Value):
        return x
    if isinstance(x, (int, Fraction)):
        return Value(Fraction(x))
    return NotImplemented


def value(x: ValueLike) -> Value:
    return Value.of(x)


def parse_value(text: str) -> Value:
    """Parse strings such as ``"3/2"``, ``"pi"``, ``"1+2*pi"``, ``"4 - sqrt2"``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty value")
    out = Value()
    i = 0
    tokens = []
    start = 0
    for i, ch in enumerate(s):
        if ch in "+-" and i > start and s[i - 1] not in "*/":
            tokens.append(s[start:i])
            start = i
    tokens.append(s[start:])
    for tok in tokens:
        sign = 1
        while tok and tok[0] in "+-":
            if tok[0] == "-":
                sign = -sign
            tok = tok[1:]
        if not tok:
            raise ValueError(f"cannot parse value {text!r}")
        if "*" in tok:
            coef, name = tok.split("*", 1)
            coef = coef.strip("()")
            out = out + Value.generator(name, sign * Fraction(coef))
        elif tok[0].isalpha():
            out = out + Value.generator(tok, sign)
        else:
            out = out + Value(sign * Fraction(tok))
    return out


def compare_values(u: ValueLike, v: ValueLike, depth_cap: Optional[int] = None) -> int:
    """Return -1, 0 or 1 as ``u`` is less than, equal to, or greater than ``v``."""
    d = Value.of(u) - Value.of(v)
    if not d.terms:
        return (d.rational > 0) - (d.rational < 0)
    cap = min(_cap(depth_cap), max(g.max_depth for g, _ in d.terms))
    for depth in range(cap + 1):
        lo, hi = d.interval(depth)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
    if d.independent:
        raise ComparisonStalled(
            f"intervals for {d} did not separate from 0 by depth {cap} "
            "(independent generators, so the difference is nonzero)"
        )
    raise ComparisonStalled(f"cannot decide the sign of {d} without an independence assertion")


def nth_root_bounds(x: Fraction, n: int, digits: int = 30) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= x**(1/n) <= hi`` with ``hi - lo <= 10**-digits``."""
    if x < 0:
        raise ValueError("negative radicand")
    scale = 10**digits
    # t^n <= x * scale^n  <=>  (t/scale)^n <= x
    target_num = x.numerator * scale**n
    t = _iroot(target_num // x.denominator, n)
    while (t + 1) ** n * x.denominator <= target_num:
        t += 1
    while t**n * x.denominator > target_num:
        t -= 1
    lo = Fraction(t, scale)
    hi = lo if lo**n == x else Fraction(t + 1, scale)
    return lo, hi


def _iroot(a: int, n: int) -> int:
    """Floor of the integer n-th root."""
    if a < 2 or n == 1:
        return a
    if n == 2:
        return math.isqrt(a)
    x = 1 << ((a.bit_length() + n - 1) // n)  # >= the root
    while True:
        y = ((n - 1) * x + a // x ** (n - 1)) // n
        if y >= x:
            return x
        x = y


def ceil_ratio(x: ValueLike, a: ValueLike) -> int:
    """Smallest integer ``k`` with ``k * a >= x``, for ``a > 0`` (certified)."""
    x, a = Value.of(x), Value.of(a)
    if a.is_rational and x.is_rational:
        return math.ceil(x.rational / a.rational)
    if a.is_rational:
        return (x / a.rational).ceil()
    xl, xh = x.enclosure(Fraction(1, 10**6))
    al, ah = a.enclosure(Fraction(1, 10**6))
    if al <= 0:
        raise ValueError_("ceil_ratio needs a positive divisor")
    k = math.ceil(min(xl / al, xl / ah))
    while compare_values(a * k, x) < 0:
        k += 1
    while compare_values(a * (k - 1), x) >= 0:
        k -= 1
    return k
