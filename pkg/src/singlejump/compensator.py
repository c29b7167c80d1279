"""Compensators of one-jump processes X_t = V 1{t >= gamma}.

Only the conditional moments of the mark V given the jump time enter:
K(t) = E[V | gamma = t] fixes the compensator and Kabs(t) = E[|V| | gamma = t]
decides whether X has locally integrable variation.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotLocallyIntegrable, VanishingK
from .functions import RealFunction, as_function
from .integrate import EPSABS, EPSREL, adaptive_batch, improper_integral, local_integrability
from .solver import DerivativePair, Representation, NoiseSpec, solve_H_from_F


@dataclass(frozen=True)
class JumpMarkSpec:
    """Conditional mean ``K`` and conditional absolute mean ``Kabs`` of the mark.

    ``Kabs`` defaults to |K|, which is exact for marks that are deterministic
    given the jump time.
    """

    K: RealFunction
    Kabs: RealFunction = None

    def __post_init__(self):
        object.__setattr__(self, "K", as_function(self.K))
        kabs = self.K.abs() if self.Kabs is None else as_function(self.Kabs)
        object.__setattr__(self, "Kabs", kabs)


@dataclass(frozen=True)
class CompensatorResult:
    """Deterministic part ``F`` of the compensator and the extra jump that a
    final atom of the law adds at t_G (0 in Case A)."""

    F: DerivativePair
    caseB_jump: float

    @property
    def d(self):
        return self.F.d


def check_locally_integrable(mark, d, epsabs=EPSABS, epsrel=EPSREL):
    """True iff E(|V| 1{gamma <= t}) is finite for every t in the support."""
    ok, _ = local_integrability(mark.Kabs, d, epsabs, epsrel)
    return ok


def compensate(mark, d, epsabs=EPSABS, epsrel=EPSREL):
    """F(t) = int_(0,t] K(s) / Gbar(s-) dG(s); in Case B also K(t_G).

    Raises
    ------
    NotLocallyIntegrable
        X does not have locally integrable variation.
    """
    if not check_locally_integrable(mark, d, epsabs, epsrel):
        raise NotLocallyIntegrable(f"E|V| 1{{gamma <= t}} is infinite for Kabs = {mark.Kabs.label}")
    K = mark.K

    def z_fn(t):
        return K(t) / d.survival_left(t)

    z = RealFunction(z_fn, f"{K.label}/Gbar(s-)")
    F = DerivativePair(0.0, z, d, validate=False, epsabs=epsabs, epsrel=epsrel)
    jump = 0.0
    if d.endpoint_case().is_B:
        jump = float(K(np.array([d.t_G]))[0])
        F.limit()
    return CompensatorResult(F, jump)


def compensator_path(res, gamma, t):
    """A_t = F(t ^ gamma) + K(t_G) 1{gamma >= t_G} 1{t >= t_G} (broadcast)."""
    gamma, t = np.broadcast_arrays(np.asarray(gamma, dtype=float), np.asarray(t, dtype=float))
    stop = np.minimum(t, gamma)
    out = res.F.F(stop)
    if res.caseB_jump:
        tG = res.d.t_G
        out = out + res.caseB_jump * ((gamma >= tG) & (t >= tG))
    return out if out.ndim else float(out)


def expected_total_mark(mark, d, epsabs=EPSABS, epsrel=EPSREL):
    """E[V 1{gamma < inf}] = int_(0,t_G] K dG (the mark vanishes at gamma = 0)."""
    r = improper_integral(mark.K, d, epsabs=epsabs, epsrel=epsrel)
    if not r.converged:
        return math.nan
    end = 0.0
    if d.endpoint_case().is_B:
        end = float(mark.K(np.array([d.t_G]))[0]) * d.atom_mass(d.t_G)
    return math.fsum([r.value, end])


def compensated_process(res, noise=None):
    """X - A as a :class:`Representation`.

    A - X is a local martingale whose pre-jump path is F and whose post-jump
    level is F(gamma) - K(gamma) (F(t_G) at a final atom), plus the centred
    noise K(gamma) - V.  ``noise`` describes V - K; zero for marks that are
    deterministic given gamma.
    """
    pair = solve_H_from_F(res.F)
    return Representation(pair.scale(-1.0), noise or NoiseSpec.zero())


def survival_from_K(K, t, epsabs=EPSABS, epsrel=EPSREL):
    """P(gamma > t) = exp(-int_0^t ds / K(s)) for a strictly positive K.

    Raises
    ------
    VanishingK
        K is not strictly positive somewhere on [0, t].
    """
    K = as_function(K)
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise ValueError("survival_from_K needs t >= 0")
    bad = []

    def recip(s):
        k = K(s)
        if np.any(~(k > 0)):
            bad.append(float(s[~(k > 0)][0]))
            k = np.where(k > 0, k, np.nan)
        return 1.0 / k

    hi = np.sort(np.unique(t))
    lo = np.concatenate([[0.0], hi[:-1]])
    check = np.linspace(0.0, hi[-1], 257) if hi.size else np.empty(0)
    recip(check)
    v, _, _, _ = adaptive_batch(recip, lo, hi, epsabs, epsrel)
    if bad:
        raise VanishingK(f"K = {K.label} is not strictly positive at s = {bad[0]:g}")
    cum = np.cumsum(v)
    out = np.exp(-cum[np.searchsorted(hi, t)])
    return float(out[0]) if scalar else out
