"""Monomial ideals as antichains of exponent vectors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "MixedArity",
    "InfiniteColength",
    "ZeroPolynomial",
    "MonomialIdeal",
    "Polynomial",
    "minimalize",
    "divides",
    "contains",
    "is_subideal",
    "product",
    "power",
    "intersect",
    "colon",
    "length_of_quotient",
    "order_at_max_ideal",
    "maximal_ideal",
    "monomial_string",
]

Exp = tuple[int, ...]


class MixedArity(ValueError):
    pass


class InfiniteColength(ValueError):
    pass


class ZeroPolynomial(ValueError):
    pass


def divides(g: Exp, a: Exp) -> bool:
    return all(x <= y for x, y in zip(g, a))


def _arity(vectors: Iterable[Exp], n: int | None = None) -> int | None:
    for v in vectors:
        if n is None:
            n = len(v)
        elif len(v) != n:
            raise MixedArity(f"exponent vector {v} does not have length {n}")
    return n


def _antichain(gens: Iterable[Exp]) -> tuple[Exp, ...]:
    # a divisor has total degree <= its multiples, so a single sweep suffices
    cands = sorted(set(gens), key=lambda a: (sum(a), a))
    kept: list[Exp] = []
    for a in cands:
        if not any(divides(g, a) for g in kept):
            kept.append(a)
    return tuple(sorted(kept))


@dataclass(frozen=True)
class MonomialIdeal:
    """Ideal of ``k[x_1..x_n]`` given by its minimal monomial generators.

    ``gens`` is the lexicographically sorted antichain; ``()`` is the zero
    ideal and ``((0,)*n,)`` the unit ideal.  Build instances with
    :func:`minimalize` or :meth:`from_gens` so the invariants hold.
    """

    n: int
    gens: tuple[Exp, ...]

    @classmethod
    def from_gens(cls, gens: Iterable[Iterable[int]], n: int | None = None) -> "MonomialIdeal":
        return minimalize([tuple(int(x) for x in g) for g in gens], n)

    @classmethod
    def unit(cls, n: int) -> "MonomialIdeal":
        return cls(n, ((0,) * n,))

    @classmethod
    def zero(cls, n: int) -> "MonomialIdeal":
        return cls(n, ())

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return self.gens == ((0,) * self.n,)

    def __contains__(self, a) -> bool:
        return contains(self, tuple(a))

    def __le__(self, other: "MonomialIdeal") -> bool:
        return is_subideal(self, other)

    def __mul__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return product(self, other)

    def __pow__(self, k: int) -> "MonomialIdeal":
        return power(self, k)

    def __and__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return intersect(self, other)

    def max_degrees(self) -> Exp:
        """Componentwise maximum over the generators."""
        if not self.gens:
            return (0,) * self.n
        return tuple(max(g[i] for g in self.gens) for i in range(self.n))

    def pure_powers(self) -> list[int | None]:
        """Exponent of the smallest pure power of each variable, or None."""
        out: list[int | None] = []
        for i in range(self.n):
            best = None
            for g in self.gens:
                if all(g[j] == 0 for j in range(self.n) if j != i):
                    best = g[i] if best is None else min(best, g[i])
            out.append(best)
        return out

    def has_finite_colength(self) -> bool:
        return all(p is not None for p in self.pure_powers())

    def length(self) -> int:
        return length_of_quotient(self)

    def to_json(self) -> list[list[int]]:
        return [list(g) for g in self.gens]

    def __str__(self) -> str:
        if self.is_zero:
            return "(0)"
        return "(" + ", ".join(monomial_string(g) for g in reversed(self.gens)) + ")"


def monomial_string(a: Exp, names: str = "xyzw") -> str:
    if len(a) > len(names):
        names_ = [f"x{i + 1}" for i in range(len(a))]
    else:
        names_ = list(names[: len(a)])
    parts = []
    for v, e in zip(names_, a):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


def minimalize(gens: Iterable[Exp], n: int | None = None) -> MonomialIdeal:
    gens = [tuple(g) for g in gens]
    n = _arity(gens, n)
    if n is None:
        raise ValueError("cannot infer the number of variables of an empty generator set")
    return MonomialIdeal(n, _antichain(gens))


def _check(I: MonomialIdeal, J: MonomialIdeal) -> None:
    if I.n != J.n:
        raise MixedArity(f"ideals live in {I.n} and {J.n} variables")


def contains(I: MonomialIdeal, a: Exp) -> bool:
    if len(a) != I.n:
        raise MixedArity(f"{a} has length {len(a)}, ideal has {I.n} variables")
    return any(divides(g, a) for g in I.gens)


def is_subideal(I: MonomialIdeal, J: MonomialIdeal) -> bool:
    _check(I, J)
    return all(contains(J, g) for g in I.gens)


def product(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check(I, J)
    return MonomialIdeal(
        I.n, _antichain(tuple(x + y for x, y in zip(a, b)) for a in I.gens for b in J.gens)
    )


def power(I: MonomialIdeal, k: int) -> MonomialIdeal:
    if k < 0:
        raise ValueError("negative power")
    out = MonomialIdeal.unit(I.n)
    base = I
    # square-and-multiply; every intermediate is minimalized
    while k:
        if k & 1:
            out = product(out, base)
        k >>= 1
        if k:
            base = product(base, base)
    return out


def intersect(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check(I, J)
    return MonomialIdeal(
        I.n, _antichain(tuple(max(x, y) for x, y in zip(a, b)) for a in I.gens for b in J.gens)
    )


def _colon_monomial(I: MonomialIdeal, g: Exp) -> MonomialIdeal:
    return MonomialIdeal(I.n, _antichain(tuple(max(x - y, 0) for x, y in zip(a, g)) for a in I.gens))


def colon(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    """``(I : J) = {f : f J ⊆ I}``."""
    _check(I, J)
    out = MonomialIdeal.unit(I.n)
    for g in J.gens:
        out = intersect(out, _colon_monomial(I, g))
    return out


def length_of_quotient(I: MonomialIdeal) -> int:
    """Number of standard monomials, i.e. ``dim_k R/I``."""
    pp = I.pure_powers()
    if any(p is None for p in pp):
        raise InfiniteColength(f"{I} has no pure power of some variable")
    if I.n == 0:
        return 0 if I.gens else 1
    if I.n == 2:
        # staircase sweep: gens sorted by x-exponent have decreasing y-exponent
        total = 0
        gens = I.gens
        for (a0, b0), (a1, _) in zip(gens, gens[1:]):
            total += (a1 - a0) * b0
        return total
    box = np.zeros(pp, dtype=bool)
    for g in I.gens:
        box[tuple(slice(x, None) for x in g)] = True
    return int(box.size - np.count_nonzero(box))


def maximal_ideal(n: int) -> MonomialIdeal:
    return MonomialIdeal(n, tuple(sorted(tuple(int(i == j) for j in range(n)) for i in range(n))))


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial with exact rational coefficients."""

    n: int
    terms: tuple[tuple[Exp, Fraction], ...]

    @classmethod
    def from_dict(cls, coeffs: Mapping[Iterable[int], object], n: int | None = None) -> "Polynomial":
        acc: dict[Exp, Fraction] = {}
        for e, c in coeffs.items():
            e = tuple(int(x) for x in e)
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        n = _arity(acc, n)
        if n is None:
            raise ValueError("cannot infer the number of variables of the zero polynomial")
        return cls(n, tuple(sorted((e, c) for e, c in acc.items() if c != 0)))

    @classmethod
    def monomial(cls, e: Iterable[int], coef=1) -> "Polynomial":
        return cls.from_dict({tuple(e): coef})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def exponents(self) -> list[Exp]:
        return [e for e, _ in self.terms]

    def __add__(self, other: "Polynomial") -> "Polynomial":
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, Fraction(0)) + c
        return Polynomial.from_dict(acc, self.n)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.n, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        acc: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(x + y for x, y in zip(e1, e2))
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
        return Polynomial.from_dict(acc, self.n)

    def to_json(self) -> list[dict]:
        return [
            {"exp": list(e), "coef": f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)}
            for e, c in self.terms
        ]

    @classmethod
    def from_json(cls, data: list[dict], n: int | None = None) -> "Polynomial":
        return cls.from_dict({tuple(t["exp"]): Fraction(t["coef"]) for t in data}, n)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            m = monomial_string(e)
            if m == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(m)
            elif c == -1:
                parts.append("-" + m)
            else:
                parts.append(f"{c}*{m}")
        return " + ".join(parts).replace("+ -", "- ")


def order_at_max_ideal(f: Polynomial) -> int:
    if f.is_zero:
        raise ZeroPolynomial("the zero polynomial has no order")
    return min(sum(e) for e, _ in f.terms)
