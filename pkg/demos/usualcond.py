"""
A local martingale that loses its mean
======================================

Under a uniform jump time on (0, 1), take the post-jump level H = 0 and start
at 1.  Balancing the pre-jump path gives F(t) = 1/(1 - t): the process climbs
until the jump and then drops to zero.  It is a local martingale, but the mean
at infinity is 0, not 1.
"""

import numpy as np

from singlejump import functions as fx
from singlejump.measure import Distribution
from singlejump.simulate import empirical_type_diagnostics, simulate
from singlejump.solver import classify, solve_F_from_H, verify_condition_m

d = Distribution.uniform()
pair = solve_F_from_H(fx.const(0.0), d, F0=1.0)

t = np.array([0.0, 0.25, 0.5, 0.9, 0.99])
print("F(t):      ", np.round(pair.F(t), 6))
print("1/(1 - t): ", np.round(1 / (1 - t), 6))

# the balance F(t) Gbar(t) + int H dG = F0 holds to rounding
print("max balance residual:", verify_condition_m(pair).max_residual)

kind = classify(pair)
print("type:", kind, "| lim F*Gbar =", kind.diagnostics["lim_FGbar"])

# %%
# Sample means stay at 1 on every fixed time before the end of the support,
# while every path ends at 0.
report = simulate(pair, [0.25, 0.5, 0.9], n_paths=100_000)
for t_, m, s, _ in report.rows():
    print(f"E M_{t_:<4} = {m:.4f} +- {s:.4f}")
print(f"E M_inf   = {report.mean_terminal:.4f}")
print(empirical_type_diagnostics(report, kind))
