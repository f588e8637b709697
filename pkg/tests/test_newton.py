from fractions import Fraction
from itertools import product as cartesian
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from valmult.monomials import InfiniteColength, MonomialIdeal, length_of_quotient, power
from valmult.newton import (
    UnsupportedDimension,
    _facets_general,
    _facets_qhull,
    covolume,
    howald_multiplier_ideal,
    hull_volume,
    integral_closure,
    multiplicity,
    newton_polyhedron,
    rees_valuations,
)

I_ = MonomialIdeal.from_gens


# -- LP oracle on conv(gens) + orthant, independent of the facet code -------

def _lp_slack(gens, q, c=1):
    """max eps with q - eps*1 in c * (conv(gens) + R^n_{>=0}); None if infeasible."""
    G = np.array(gens, dtype=float).T * float(c)
    n, k = G.shape
    # variables: lambda_1..k, eps ; minimize -eps
    obj = np.zeros(k + 1)
    obj[-1] = -1
    A_ub = np.hstack([G, np.ones((n, 1))])
    A_eq = np.hstack([np.ones((1, k)), np.zeros((1, 1))])
    res = linprog(obj, A_ub=A_ub, b_ub=np.array(q, dtype=float), A_eq=A_eq, b_eq=[1],
                  bounds=[(0, None)] * k + [(None, 1)], method="highs")
    return None if res.status != 0 else -res.fun


def in_hull(gens, q):
    s = _lp_slack(gens, q)
    return s is not None and s >= -1e-9


def in_interior(gens, q, c):
    s = _lp_slack(gens, q, c)
    return s is not None and s > 1e-9


def ideals(n, max_exp=5, max_gens=4, finite=True):
    vec = st.tuples(*[st.integers(0, max_exp)] * n)
    gens = st.lists(vec, min_size=1, max_size=max_gens)
    if not finite:
        return gens.filter(lambda g: any(any(x) for x in g) or True).map(lambda g: I_(g, n))
    pure = st.tuples(*[st.integers(1, max_exp + 1)] * n)
    return st.tuples(gens, pure).map(
        lambda t: I_(t[0] + [tuple(p if i == j else 0 for j in range(n)) for i, p in enumerate(t[1])], n)
    )


two_or_three = st.sampled_from([2, 3])


# -- examples --------------------------------------------------------------

def test_polyhedron_examples():
    P = newton_polyhedron(I_([(2, 0), (0, 3)]))
    assert set(P.facets) == {((3, 2), 6), ((1, 0), 0), ((0, 1), 0)}
    assert P.vertices == ((0, 3), (2, 0))
    P = newton_polyhedron(I_([(1, 0), (0, 1)]))
    assert ((1, 1), 1) in P.facets and P.vertices == ((0, 1), (1, 0))
    P = newton_polyhedron(I_([(2, 0), (1, 1), (0, 3)]))
    assert {f for f in P.facets if f[1] > 0} == {((1, 1), 2), ((2, 1), 3)}
    assert P.vertices == ((0, 3), (1, 1), (2, 0))
    j = newton_polyhedron(I_([(2, 0), (0, 3)])).to_json()
    assert {"normal": [3, 2], "offset": "6/1"} in j["facets"]
    assert j["vertices"] == [[0, 3], [2, 0]]


def test_closure_examples():
    assert integral_closure(I_([(2, 0), (0, 3)])) == I_([(2, 0), (1, 2), (0, 3)])
    m = I_([(1, 0), (0, 1)])
    assert integral_closure(m) == m
    assert integral_closure(I_([(4, 0), (0, 4)])) == power(m, 4)


def test_covolume_and_multiplicity_examples():
    assert covolume(newton_polyhedron(I_([(1, 0), (0, 1)]))) == Fraction(1, 2)
    assert covolume(newton_polyhedron(I_([(2, 0), (0, 3)]))) == 3
    assert covolume(newton_polyhedron(I_([(2, 0), (1, 1), (0, 3)]))) == Fraction(5, 2)
    assert multiplicity(I_([(1, 0), (0, 1)])) == 1
    assert multiplicity(I_([(2, 0), (0, 3)])) == 6
    assert multiplicity(I_([(2, 0), (1, 1), (0, 3)])) == 5
    assert multiplicity(power(I_([(1, 0, 0), (0, 1, 0), (0, 0, 1)]), 3)) == 27
    assert multiplicity(power(I_([(1, 0, 0, 0), (0, 2, 0, 0), (0, 0, 1, 0), (0, 0, 0, 3)]), 2)) == 96


def test_howald_examples():
    I = I_([(2, 0), (0, 3)])
    assert howald_multiplier_ideal(I, 1) == I_([(1, 0), (0, 1)])
    assert howald_multiplier_ideal(I, Fraction(2, 3)).is_unit
    assert howald_multiplier_ideal(I_([(1, 0), (0, 1)]), 2) == I_([(1, 0), (0, 1)])


def test_rees_examples():
    assert rees_valuations(I_([(2, 0), (0, 3)])) == [((3, 2), 6)]
    assert rees_valuations(I_([(1, 0), (0, 1)])) == [((1, 1), 1)]
    assert rees_valuations(I_([(2, 0), (1, 1), (0, 3)])) == [((1, 1), 2), ((2, 1), 3)]


def test_errors():
    with pytest.raises(UnsupportedDimension):
        newton_polyhedron(I_([(1, 0, 0, 0, 0)]))
    with pytest.raises(InfiniteColength):
        multiplicity(I_([(1, 1)]))


def test_hull_volume_unit_cube_and_simplex():
    cube = [tuple(Fraction(x) for x in p) for p in cartesian((0, 1), repeat=3)]
    assert hull_volume(cube, 3) == 1
    simplex = [(Fraction(0),) * 3] + [tuple(Fraction(int(i == j)) for j in range(3)) for i in range(3)]
    assert hull_volume(simplex, 3) == Fraction(1, 6)


# -- facets: invariants and the two enumeration routes ----------------------

@given(two_or_three.flatmap(lambda n: ideals(n, 5, 5)))
def test_facets_valid_and_tight(I):
    P = newton_polyhedron(I)
    for v, w in P.facets:
        assert all(x >= 0 for x in v) and math.gcd(*v) == 1
        assert all(sum(a * b for a, b in zip(v, g)) >= w for g in I.gens)
        assert min(sum(a * b for a, b in zip(v, g)) for g in I.gens) == w
    for g in P.vertices:
        assert g in I.gens


@settings(max_examples=60)
@given(st.sampled_from([3, 4]).flatmap(lambda n: st.lists(st.tuples(*[st.integers(0, 5)] * n), min_size=1, max_size=9).map(lambda g: I_(g, n))))
def test_qhull_route_matches_exhaustive(I):
    assert _facets_qhull(list(I.gens), I.n) == _facets_general(list(I.gens), I.n)


def test_qhull_route_used_for_large_inputs():
    m = I_([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    I = power(m, 6)  # 28 generators, a single bounded facet
    assert {f for f in newton_polyhedron(I).facets if f[1] > 0} == {((1, 1, 1), 6)}


# -- closure and Howald against the LP oracle --------------------------------

@settings(max_examples=80)
@given(two_or_three.flatmap(lambda n: ideals(n, 4, 4)))
def test_integral_closure_matches_lp(I):
    J = integral_closure(I)
    bound = max(I.max_degrees())
    for a in cartesian(range(bound + 1), repeat=I.n):
        assert (a in J) == in_hull(I.gens, a)


coeffs = st.sampled_from([Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(3, 2), Fraction(2)])


@settings(max_examples=80)
@given(two_or_three.flatmap(lambda n: ideals(n, 4, 4, finite=False)), coeffs)
def test_howald_matches_lp(I, c):
    J = howald_multiplier_ideal(I, c)
    bound = math.ceil(c * max(I.max_degrees())) + 1
    for b in cartesian(range(bound + 1), repeat=I.n):
        assert (b in J) == in_interior(I.gens, [x + 1 for x in b], c)


# -- algebraic properties ----------------------------------------------------

@given(two_or_three.flatmap(lambda n: ideals(n, 5, 4, finite=False)))
def test_ideal_inside_its_multiplier_ideal(I):
    assert I <= howald_multiplier_ideal(I, 1)


@given(two_or_three.flatmap(lambda n: ideals(n, 4, 3)), st.sampled_from([Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(3, 2)]), st.sampled_from([2, 3]))
def test_subadditivity(I, c, l):
    assert howald_multiplier_ideal(I, l * c) <= power(howald_multiplier_ideal(I, c), l)


@given(two_or_three.flatmap(lambda n: ideals(n, 4, 4)), coeffs, coeffs)
def test_monotone_in_coefficient(I, c, d):
    lo, hi = min(c, d), max(c, d)
    assert howald_multiplier_ideal(I, hi) <= howald_multiplier_ideal(I, lo)


@given(two_or_three.flatmap(lambda n: ideals(n, 4, 4)))
def test_closure_idempotent_and_multiplicity_invariant(I):
    J = integral_closure(I)
    assert I <= J
    assert integral_closure(J) == J
    assert multiplicity(J) == multiplicity(I)


@given(two_or_three.flatmap(lambda n: ideals(n, 4, 4)))
def test_rees_offsets_are_minimum_values(I):
    for w, e in rees_valuations(I):
        assert e == min(sum(a * b for a, b in zip(w, g)) for g in I.gens)
        assert e > 0


def _finite_difference(seq, n):
    for _ in range(n):
        seq = [b - a for a, b in zip(seq, seq[1:])]
    return seq


def test_multiplicity_matches_hilbert_samuel_leading_coefficient():
    # 10 seeded random ideals, n <= 3: the n-th difference of l -> length(R/I^l)
    # is constant = e(I) once the length function is polynomial
    rng = random.Random(0)
    done = 0
    while done < 10:
        n = 2 if done < 6 else 3
        top = 3 if n == 2 else 2
        pure = [tuple(rng.randint(1, top) * (i == j) for j in range(n)) for i in range(n)]
        extra = [tuple(rng.randint(0, top) for _ in range(n)) for _ in range(rng.randint(0, 2))]
        I = I_(pure + extra, n)
        d = n * max(sum(g) for g in I.gens)
        lengths = [length_of_quotient(power(I, l)) for l in range(d, d + n + 2)]
        diffs = _finite_difference(lengths, n)
        assert diffs[0] == diffs[1], (I, lengths)
        assert diffs[0] == multiplicity(I), (I, diffs)
        done += 1
