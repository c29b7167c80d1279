"""
Classifying single-jump local martingales
=========================================

One law per row, decided from the integrability of H and the noise, the
limit of F Gbar and, when that limit vanishes, int Gbar |dF/dG| dG.
Some of these integrals converge like 1/log t; double precision cannot
resolve them, so they are declared rather than computed.
"""

from singlejump import functions as fx
from singlejump.measure import Distribution, ExponentialPiece
from singlejump.solver import NoiseSpec, classify, solve_F_from_H

uniform = Distribution.uniform()
expo = Distribution.exponential()
two = Distribution.atomic({1.0: 0.5, 2.0: 0.5})
leaky = Distribution(pieces=[ExponentialPiece(0.0, None, 0.6, rate=1.0)], mass_inf=0.4)

type3_H = fx.exponential(1.0) * fx.power(-2.0, shift=1.0) - 1.0

rows = [
    ("H = 0, F0 = 1, uniform", solve_F_from_H(fx.const(0.0), uniform, F0=1.0), None, None),
    ("H = 0, F0 = -1, uniform", solve_F_from_H(fx.const(0.0), uniform, F0=-1.0), None, None),
    ("H = 2s - 1, uniform", solve_F_from_H(fx.affine(2, -1), uniform, F0=0.0), None, None),
    ("noise J = 1/s, Exp(1)", solve_F_from_H(fx.const(0.0), expo, F0=0.0),
     NoiseSpec.two_point(fx.power(-1.0)), None),
    ("H = e^s/(1+s)^2 - 1, Exp(1)", solve_F_from_H(type3_H, expo, F0=0.0), None,
     {"lim": 0.0, "H1": "divergent"}),
    ("two atoms", solve_F_from_H(fx.points([1, 2], [1, -1]), two), None, None),
    ("mass at infinity", solve_F_from_H(fx.const(0.0), leaky, F0=1.0), None, None),
]

for label, pair, noise, declared in rows:
    kind = classify(pair, noise, declared=declared)
    print(f"{label:<30} {kind.tag:<7} {' / '.join(kind.diagnostics['path'])}")
