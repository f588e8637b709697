"""
Volumes of graded families
==========================

vol = limsup n! length(R/a_m) / m^n.  The (1, pi) family has volume 1/pi; the
arc valuation has colength m, so its volume is 0 while its 1-volume is 1.
"""

from valmult import Arc, MonomialVal
from valmult.asymptotics import p_volume_estimate, volume_estimate

est = volume_estimate(MonomialVal.of(1, "pi"), 500, 10)
print("exact:", est.exact, "=", est.exact.approx())
print(est.to_tsv())

arc = volume_estimate(Arc(), 40, 5)
print("arc volume:", arc.exact, " samples:", [float(s[2]) for s in arc.samples])
print("arc 1-volume samples:", [str(s[2]) for s in p_volume_estimate(Arc(), 1, 40, 5).samples])
