"""
Compensators of a single jump
=============================

For X = V 1{t >= gamma} only K(t) = E[V | gamma = t] matters: the compensator
is A_t = F(t ^ gamma) with dF = K dG / Gbar(t-), plus K(t_G) when gamma lands
on a final atom t_G.  The same relation read backwards recovers the law of
gamma from K.
"""

import numpy as np

from singlejump import functions as fx
from singlejump.compensator import (JumpMarkSpec, compensate, compensated_process,
                                    compensator_path, survival_from_K)
from singlejump.measure import Distribution
from singlejump.simulate import simulate

# %%
# Exponential jump time, unit mark: the compensator is t ^ gamma.
expo = Distribution.exponential()
res = compensate(JumpMarkSpec(fx.const(1.0)), expo)
t = np.array([0.5, 1.0, 2.0, 5.0])
print("F(t) =", res.F.F(t))
print("A at t = 3 for gamma = 2:", compensator_path(res, 2.0, 3.0))

report = simulate(compensated_process(res), t, n_paths=100_000)
print("E[X_t - A_t]:", np.round(report.mean, 4), "+-", np.round(report.se, 4))

# %%
# Two equally likely jump times.  The hazard at 1 is 1/2 and at 2 it is 1,
# which arrives as the final-atom jump.
two = Distribution.atomic({1.0: 0.5, 2.0: 0.5})
rb = compensate(JumpMarkSpec(fx.const(1.0)), two)
for g in (1.0, 2.0):
    print(f"gamma = {g}: A_inf = {compensator_path(rb, g, 10.0)}")

# %%
# Reading the identity backwards: exp(-int_0^t ds / K(s)).
print("K = 1:     ", survival_from_K(fx.const(1.0), [0.5, 1.0, 2.0]))
print("K = 1 + s: ", survival_from_K(fx.affine(1.0, 1.0), 1.0))
