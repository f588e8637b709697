"""
Asymptotic multiplier ideals
============================

j_m is the largest of the ideals J((1/p) a_(pm)).  For a monomial valuation
it has the closed form {b : sum (b_i + 1) w_i > m}.
"""

from fractions import Fraction

from valmult import MonomialVal, closed_form_jm
from valmult.asymptotics import stabilize_multiplier_ideal
from valmult.newton import howald_multiplier_ideal

for weights, m in [((1, 1), 3), (("3/2", "3/2"), 7), ((1, "pi"), 4)]:
    F = MonomialVal.of(*weights)
    s = stabilize_multiplier_ideal(F, m)
    print(f"weights {weights}, m = {m}: j_m = {s.ideal} at p = {s.p} (certified: {s.certified})")
    print("   closed form:", closed_form_jm(F.valuation, m))

# doubling from p = 1 pauses below the limit here
F = MonomialVal.of("3/2", "3/2")
for p in (1, 2, 4):
    print(f"p = {p}: {howald_multiplier_ideal(F.at(7 * p), Fraction(1, p))}")
