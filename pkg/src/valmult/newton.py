"""Newton polyhedra of monomial ideals in at most four variables.

Facets are found exactly: every supporting hyperplane of
``conv(gens) + R^n_{>=0}`` passes through ``k >= 1`` generators and contains
``n - k`` coordinate rays, so trying all such choices and keeping the valid
inequalities yields every facet.  In two variables a monotone-chain sweep over
the sorted staircase does the same job faster; with many generators in three or
four variables qhull proposes the candidate simplices instead, and each one is
re-solved and checked in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .monomials import InfiniteColength, MonomialIdeal, minimalize

__all__ = [
    "UnsupportedDimension",
    "UnboundedComplement",
    "Facet",
    "NewtonPolyhedron",
    "newton_polyhedron",
    "integral_closure",
    "covolume",
    "multiplicity",
    "howald_multiplier_ideal",
    "rees_valuations",
    "hull_volume",
]

MAX_DIM = 4


class UnsupportedDimension(ValueError):
    pass


class UnboundedComplement(ValueError):
    pass


Facet = tuple[tuple[int, ...], Fraction]  # <normal, a> >= offset


def _primitive(v: Sequence[Fraction], w: Fraction) -> Facet:
    den = math.lcm(*(Fraction(x).denominator for x in (*v, w)))
    ints = [int(Fraction(x) * den) for x in v]
    wi = Fraction(w) * den
    g = math.gcd(*ints)
    return tuple(x // g for x in ints), wi / g


def _nullvector(rows: list[list[Fraction]]) -> list[Fraction] | None:
    """A spanning vector of the kernel when it is one-dimensional."""
    m = [list(r) for r in rows]
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    vec = [Fraction(0)] * ncols
    vec[fc] = Fraction(1)
    for i, c in enumerate(pivots):
        vec[c] = -m[i][fc]
    return vec


def _dot(v, a) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(v, a)), Fraction(0))


@dataclass(frozen=True)
class NewtonPolyhedron:
    """``{a : <normal, a> >= offset for every facet}``; normals are primitive
    nonnegative integer vectors, coordinate faces included when they are facets."""

    n: int
    facets: tuple[Facet, ...]
    vertices: tuple[tuple[int, ...], ...]

    def contains(self, a: Sequence, scale: Fraction = Fraction(1)) -> bool:
        return all(_dot(v, a) >= scale * w for v, w in self.facets)

    def interior_contains(self, a: Sequence, scale: Fraction = Fraction(1)) -> bool:
        return all(_dot(v, a) > scale * w for v, w in self.facets)

    def bounded_facets(self) -> list[Facet]:
        """Facets with positive offset (the ones not through the origin)."""
        return [f for f in self.facets if f[1] > 0]

    def to_json(self) -> dict:
        return {
            "facets": [
                {"normal": list(v), "offset": f"{w.numerator}/{w.denominator}"} for v, w in self.facets
            ],
            "vertices": [list(p) for p in self.vertices],
        }


def _check_dim(I: MonomialIdeal) -> None:
    if I.n > MAX_DIM:
        raise UnsupportedDimension(f"{I.n} variables; at most {MAX_DIM} supported")
    if I.n < 1:
        raise UnsupportedDimension("need at least one variable")


def _facets_2d(gens: Sequence[tuple[int, int]]) -> set[Facet]:
    pts = sorted(gens)  # x increasing, y decreasing (antichain)
    hull: list[tuple[int, int]] = []
    for p in pts:
        # lower chain: drop the last point while it is not strictly convex
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            cross = (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    facets: set[Facet] = {
        _primitive((Fraction(1), Fraction(0)), Fraction(hull[0][0])),
        _primitive((Fraction(0), Fraction(1)), Fraction(hull[-1][1])),
    }
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        v = (Fraction(y1 - y2), Fraction(x2 - x1))
        facets.add(_primitive(v, _dot(v, (x1, y1))))
    return facets


def _facets_general(gens: Sequence[tuple[int, ...]], n: int) -> set[Facet]:
    facets: set[Facet] = set()
    seen: set[Facet] = set()
    unit_rows = [[Fraction(int(i == j)) for j in range(n)] + [Fraction(0)] for i in range(n)]
    for k in range(1, n + 1):
        for pts in combinations(gens, k):
            prow = [[Fraction(x) for x in p] + [Fraction(-1)] for p in pts]
            for rays in combinations(range(n), n - k):
                vec = _nullvector(prow + [unit_rows[i] for i in rays])
                if vec is None:
                    continue
                v, w = vec[:n], vec[n]
                if all(x <= 0 for x in v):
                    v, w = [-x for x in v], -w
                if any(x < 0 for x in v) or all(x == 0 for x in v):
                    continue
                cand = _primitive(v, w)
                if cand in seen:
                    continue
                seen.add(cand)
                if all(_dot(cand[0], g) >= cand[1] for g in gens):
                    facets.add(cand)
    return facets


QHULL_THRESHOLD = 12


def _facets_qhull(gens: Sequence[tuple[int, ...]], n: int) -> set[Facet]:
    """Candidate simplices from qhull, each re-solved and verified exactly.

    The hull of the generators together with ``g + R e_i`` has every facet of
    the Newton polyhedron among its facets (for any ``R > 0``); facets with a
    negative normal entry belong to the far cap and are discarded.
    """
    from scipy.spatial import ConvexHull

    gens = list(gens)
    R = max(max(g) for g in gens) + 1
    pts: list[tuple[tuple[int, ...], int | None]] = [(g, None) for g in gens]
    for g in gens:
        for i in range(n):
            pts.append((g, i))
    coords = np.array([[x + R * (i == j) for j, x in enumerate(g)] if i is not None else list(g) for g, i in pts], dtype=float)
    hull = ConvexHull(coords)
    facets: set[Facet] = set()
    seen: set[Facet] = set()
    G = np.array(gens, dtype=object)
    for simplex, eq in zip(hull.simplices, hull.equations):
        # qhull normals point outward; inward normal is -eq[:n]
        if np.any(-eq[:n] < -1e-9):
            continue
        base = sorted({pts[k][0] for k in simplex})
        rays = sorted({pts[k][1] for k in simplex if pts[k][1] is not None})
        rows = [[Fraction(x) for x in p] + [Fraction(-1)] for p in base]
        rows += [[Fraction(int(i == j)) for j in range(n)] + [Fraction(0)] for i in rays]
        vec = _nullvector(rows)
        if vec is None:
            continue
        v, w = vec[:n], vec[n]
        if all(x <= 0 for x in v):
            v, w = [-x for x in v], -w
        if any(x < 0 for x in v) or all(x == 0 for x in v):
            continue
        cand = _primitive(v, w)
        if cand in seen:
            continue
        seen.add(cand)
        if np.all(G.dot(np.array(cand[0], dtype=object)) >= int(cand[1])):
            facets.add(cand)
    return facets


def _vertices(gens: Sequence[tuple[int, ...]], facets: Sequence[Facet], n: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for g in gens:
        tight = [list(map(Fraction, v)) for v, w in facets if _dot(v, g) == w]
        if tight and _rank(tight) == n:
            out.append(g)
    return tuple(sorted(out))


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0])
    for c in range(ncols):
        p = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[rank], m[p] = m[p], m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def newton_polyhedron(I: MonomialIdeal) -> NewtonPolyhedron:
    _check_dim(I)
    if I.is_zero:
        raise ValueError("the zero ideal has no Newton polyhedron")
    gens = list(I.gens)
    if I.n == 2:
        facets = _facets_2d(gens)
    elif I.n == 1:
        facets = {((1,), Fraction(gens[0][0]))}
    elif len(gens) <= QHULL_THRESHOLD:
        facets = _facets_general(gens, I.n)
    else:
        facets = _facets_qhull(gens, I.n)
    facets_t = tuple(sorted(facets))
    return NewtonPolyhedron(I.n, facets_t, _vertices(gens, facets_t, I.n))


def _integer_facets(P: NewtonPolyhedron) -> tuple[np.ndarray, list[Fraction]]:
    A = np.array([v for v, _ in P.facets], dtype=np.int64).reshape(len(P.facets), P.n)
    return A, [w for _, w in P.facets]


def _box_points(bounds: Sequence[int]) -> np.ndarray:
    grids = np.meshgrid(*[np.arange(b + 1, dtype=np.int64) for b in bounds], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _lattice_gens(P: NewtonPolyhedron, bounds: Sequence[int], shift: int, scale: Fraction, strict: bool) -> MonomialIdeal:
    """Minimal generators of ``{b in box : <v, b + shift> (>|>=) scale * w}``."""
    pts = _box_points(bounds)
    A, offsets = _integer_facets(P)
    lhs = (pts + shift) @ A.T
    ok = np.ones(len(pts), dtype=bool)
    for j, w in enumerate(offsets):
        t = scale * w
        col = lhs[:, j] * t.denominator
        ok &= (col > t.numerator) if strict else (col >= t.numerator)
    chosen = [tuple(int(x) for x in p) for p in pts[ok]]
    if not chosen:
        return MonomialIdeal.zero(P.n)
    return minimalize(chosen, P.n)


def integral_closure(I: MonomialIdeal) -> MonomialIdeal:
    """Monomials whose exponents lie in the Newton polyhedron."""
    _check_dim(I)
    if I.is_zero:
        return I
    P = newton_polyhedron(I)
    return _lattice_gens(P, I.max_degrees(), 0, Fraction(1), strict=False)


def hull_volume(points: Sequence[Sequence[Fraction]], d: int) -> Fraction:
    """Exact ``d``-volume of the convex hull of ``points`` in ``Q^d``.

    Sums pyramids from the centroid over the facets.  A pyramid's height and
    its base's (d-1)-volume both carry the irrational ``|u|`` of the facet
    normal ``u``; projecting the base along a coordinate ``j`` with
    ``u_j != 0`` cancels it:  ``|<u,c> - w| * vol(proj_j F) / (d * |u_j|)``.
    """
    pts = sorted({tuple(Fraction(x) for x in p) for p in points})
    if d == 0:
        return Fraction(1)
    if len(pts) <= d:
        return Fraction(0)
    if d == 1:
        return max(p[0] for p in pts) - min(p[0] for p in pts)
    centroid = [sum(p[i] for p in pts) / len(pts) for i in range(d)]
    seen = set()
    total = Fraction(0)
    for sub in combinations(pts, d):
        vec = _nullvector([list(p) + [Fraction(-1)] for p in sub])
        if vec is None:
            continue
        u, w = vec[:d], vec[d]
        key = _primitive(u, w) if any(u) else None
        if key is None:
            continue
        first = next(x for x in key[0] if x != 0)
        if first < 0:
            key = (tuple(-x for x in key[0]), -key[1])
        if key in seen:
            continue
        seen.add(key)
        u, w = key
        sides = {(_dot(u, p) > w) - (_dot(u, p) < w) for p in pts}
        if 1 in sides and -1 in sides:
            continue
        face = [p for p in pts if _dot(u, p) == w]
        j = next(i for i, x in enumerate(u) if x != 0)
        proj = [p[:j] + p[j + 1:] for p in face]
        total += abs(_dot(u, centroid) - w) * hull_volume(proj, d - 1) / (d * abs(u[j]))
    return total


def covolume(P: NewtonPolyhedron) -> Fraction:
    """Volume of ``R^n_{>=0}`` minus ``P``; the region is star-shaped from 0."""
    if P.n == 1:
        return P.facets[0][1]
    total = Fraction(0)
    for v, w in P.bounded_facets():
        if any(x == 0 for x in v):
            raise UnboundedComplement("the complement of the Newton polyhedron is unbounded")
        face = [p for p in P.vertices if _dot(v, p) == w]
        j = 0
        proj = [tuple(Fraction(x) for x in p[1:]) for p in face]
        total += w * hull_volume(proj, P.n - 1) / (P.n * v[j])
    # coordinate facets must all be present, otherwise some axis escapes
    for i in range(P.n):
        e = tuple(int(i == j) for j in range(P.n))
        if (e, Fraction(0)) not in P.facets:
            raise UnboundedComplement("the complement of the Newton polyhedron is unbounded")
    return total


def multiplicity(I: MonomialIdeal) -> int:
    """Hilbert-Samuel multiplicity ``e(I) = n! * covolume(Newt(I))``."""
    _check_dim(I)
    if not I.has_finite_colength():
        raise InfiniteColength(f"{I} does not have finite colength")
    if I.is_unit:
        return 0
    e = math.factorial(I.n) * covolume(newton_polyhedron(I))
    if e.denominator != 1:
        raise ArithmeticError(f"non-integral multiplicity {e}")
    return int(e)


def howald_multiplier_ideal(I: MonomialIdeal, c) -> MonomialIdeal:
    """Multiplier ideal ``J(c * I)`` of a monomial ideal.

    ``x^b`` is in it exactly when ``b + (1, ..., 1)`` lies in the interior of
    ``c * Newt(I)``.
    """
    _check_dim(I)
    c = Fraction(c)
    if c <= 0:
        raise ValueError("the coefficient must be positive")
    if I.is_zero:
        raise ValueError("multiplier ideal of the zero ideal")
    P = newton_polyhedron(I)
    bounds = [math.floor(c * m) for m in I.max_degrees()]
    J = _lattice_gens(P, bounds, 1, c, strict=True)
    if J.is_zero:
        raise AssertionError("multiplier ideal unexpectedly empty")
    return J


def rees_valuations(I: MonomialIdeal) -> list[tuple[tuple[int, ...], int]]:
    """Weighted-order valuations attached to the non-coordinate facets."""
    _check_dim(I)
    if not I.has_finite_colength():
        raise InfiniteColength(f"{I} does not have finite colength")
    P = newton_polyhedron(I)
    out = []
    for v, w in P.bounded_facets():
        e = min(_dot(v, g) for g in I.gens)
        assert e == w
        out.append((v, int(w)))
    return sorted(out)
