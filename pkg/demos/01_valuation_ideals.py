"""
Valuation ideals of a monomial valuation
========================================

Weights (1, pi) on x and y.  The ideal a_m holds every monomial of value at
least m, and its generators trace a staircase under the line a + pi b = m.
"""

from valmult import MonomialValuation, MonomialVal, multiplicity
from valmult.valuations import monomial_valuation_ideal

v = MonomialValuation.of(1, "pi")
for m in (4, 7, 10):
    I = monomial_valuation_ideal(v, m)
    print(f"a_{m} = {I}   colength {I.length()}   e = {multiplicity(I)}")

# a graded family: a_m a_l sits inside a_(m+l)
F = MonomialVal(v)
print("a_3 a_4 inside a_7:", F.at(3) * F.at(4) <= F.at(7))
