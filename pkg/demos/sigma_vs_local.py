"""
Finite but not locally integrable noise
=======================================

Let the jump time be Exp(1) and, at the jump, add a fair sign Y scaled by
J(gamma).  Nothing happens before the jump, so every path is a martingale
in its own right.  Whether the process is a local martingale depends on
whether E|J(gamma)| 1{gamma <= t} is finite.  With J(t) = 1/t it is not: the
process is a sigma-martingale only.  With J(t) = t^-1/2 it is.
"""

from singlejump import functions as fx
from singlejump.compensator import JumpMarkSpec, check_locally_integrable
from singlejump.integrate import improper_integral, truncation_sequence
from singlejump.measure import Distribution
from singlejump.solver import (ConditionMPair, NoiseSpec, sigma_status,
                               verify_martingale_property)

d = Distribution.exponential()
zero = ConditionMPair.zero(d)

for alpha in (-1.0, -0.5):
    J = fx.power(alpha)
    noise = NoiseSpec.two_point(J)
    print(f"J = {J.label}")
    print("  status:               ", sigma_status(zero, noise))
    print("  martingale criterion: ", bool(verify_martingale_property(zero, noise)))
    print("  locally integrable:   ", check_locally_integrable(JumpMarkSpec(J), d))
    r = improper_integral(J, d)
    print(f"  int J dG converged={r.converged} value={r.value:.6f}")

# %%
# The divergence test looks at partial integrals over shrinking neighbourhoods
# of 0.  For 1/t each halving of the mass adds about log 2.
S, _ = truncation_sequence(fx.power(-1.0), d, "left", n=10)
print("partial integrals near 0:", [round(v, 4) for v in S.tolist()])
