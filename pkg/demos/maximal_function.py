"""
Running maximum of a uniformly integrable martingale
=====================================================

With a monotone post-jump level the pre-jump path is an average of H over
what is still to come.  For H(s) = 2s - 1 on a uniform jump time this average
is F(t) = t, so the running maximum of M is F(gamma) = gamma and the jump
overshoots downwards by 1 - gamma.
"""

import numpy as np

from singlejump import functions as fx
from singlejump.measure import Distribution
from singlejump.simulate import empirical_type_diagnostics, simulate
from singlejump.solver import classify, solve_F_from_H

d = Distribution.uniform()
pair = solve_F_from_H(fx.affine(2.0, -1.0), d, F0=0.0)

grid = np.linspace(0.1, 0.9, 9)
print("max |F(t) - t| on the grid:", np.max(np.abs(pair.F(grid) - grid)))

kind = classify(pair)
print("type:", kind)
print("int Gbar |dF/dG| dG =", kind.diagnostics["H1_integral"]["value"])

# %%
# E sup M = E gamma = 1/2, and every path has total variation
# gamma + (1 - gamma) = 1.
small = simulate(pair, grid, n_paths=10_000, seed=1)
large = simulate(pair, grid, n_paths=40_000, seed=2)
print(f"E sup M      = {large.mean_sup:.4f} +- {large.se_sup:.4f}")
print(f"E Var(M)_inf = {large.mean_variation:.12f}")
print(empirical_type_diagnostics(small, kind, followup=large))

# CSV for plotting elsewhere
print("t,mean,se,n")
for row in large.rows():
    print(",".join(f"{v:.6g}" for v in row))
