"""
Verification suites
===================

Each suite returns a Report: one case per check, with a witness on failure.
"""

from valmult import MonomialValuation, MonomialIdeal
from valmult.harness import verify_izumi, verify_rees_bound, verify_theorem_a, zariski_volume_report
from valmult.valuations import ZariskiValuation

rep = verify_theorem_a(MonomialValuation.of(1, "pi"), [2, 5, 10], [1, 2, 3])
print(rep.to_tsv().splitlines()[-1])

rep = verify_izumi(MonomialValuation.of(1, "pi"), trial_count=200)
print(rep.to_tsv().splitlines()[-1])

print(verify_rees_bound(MonomialIdeal.from_gens([(2, 0), (1, 1), (0, 3)])).to_tsv())

# the Zariski example: alpha_t decreases to the limit, the count ratio stays above
rep = zariski_volume_report(ZariskiValuation.primes(8), count_depth=3)
for c in rep.cases:
    if c.inputs["check"] == "2*count/m^2 <= limit":
        print(c.inputs["m"], c.actual["approx"], c.status)
