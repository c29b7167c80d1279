"""Monte Carlo for single-jump local martingales.

A path is fixed by the jump time gamma and the noise draw L'; between grid
points nothing random happens, so M is evaluated exactly at the requested
times.  Path ``i`` draws its uniforms from a counter-based generator keyed by
(seed, i), and every reduction is an exactly rounded sum, so reports do not
depend on how paths are split across workers.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NonFiniteValue
from .integrate import cumulative
from .rng import path_uniforms
from .settings import N_PATHS, SEED
from .solver import NoiseSpec

_CHUNK = 25_000


@dataclass
class PathSample:
    """One simulated path on the report grid."""

    gamma: float
    L: float
    values: list
    sup_abs: float
    variation: float


@dataclass
class SimulationReport:
    """Sample means and standard errors.

    ``mean``/``se`` are per grid time; ``*_sup``, ``*_sup_abs``,
    ``*_variation`` and ``*_terminal`` are for sup M, sup |M|, the total
    variation Var(M)_inf and M_inf.
    """

    n_paths: int
    seed: int
    grid: np.ndarray
    mean: np.ndarray
    se: np.ndarray
    mean_sup: float
    se_sup: float
    mean_sup_abs: float
    se_sup_abs: float
    mean_variation: float
    se_variation: float
    mean_terminal: float
    se_terminal: float
    expected_M0: float
    extras: dict = field(default_factory=dict)

    def within(self, target, n_se=4.0):
        """Per grid time: is the mean within ``n_se`` standard errors of target?"""
        return np.abs(self.mean - target) <= n_se * self.se + 1e-12 * (1 + np.abs(target))

    def rows(self):
        return [(float(t), float(m), float(s), self.n_paths)
                for t, m, s in zip(self.grid, self.mean, self.se)]


def _stats(x):
    """Exactly rounded mean and standard error (order independent)."""
    n = x.size
    m = math.fsum(x) / n
    if n < 2:
        return m, 0.0
    var = math.fsum((x - m) ** 2) / (n - 1)
    return m, math.sqrt(var / n)


class _Engine:
    def __init__(self, rep, grid, monitor, seed):
        pair, noise = rep.pair, rep.noise
        d = pair.d
        self.pair, self.noise, self.d, self.seed = pair, noise, d, int(seed)
        self.grid = grid
        self.F_grid = pair.F(grid)
        m = np.unique(np.concatenate([grid, monitor, [0.0]]))
        m = m[m < d.t_G]
        fm = pair.F(m)
        if not np.all(np.isfinite(fm)):
            raise NonFiniteValue("F is not finite on the monitoring grid")
        self.mon = m
        self.mon_max = np.maximum.accumulate(fm)
        self.mon_absmax = np.maximum.accumulate(np.abs(fm))
        self.absz = pair.F.z.abs()
        self.F0 = pair.F0
        self._limit = None
        self._var_inf = None
        if d.mass_inf > 0:
            self._limit = pair.F.limit()
            self._var_inf = abs(self.F0) + cumulative(self.absz, d, np.array([d.t_G]))[0][0]

    def run(self, start, stop):
        d, pair = self.d, self.pair
        u = path_uniforms(self.seed, start, stop)
        gamma = d.sample(u[:, 0])
        lprime = self.noise.sample(gamma, u[:, 1])
        fin = np.isfinite(gamma)
        n = gamma.size
        L = np.full(n, np.nan)
        if fin.any():
            L[fin] = pair.H(gamma[fin]) + lprime[fin]
            if not np.all(np.isfinite(L[fin])):
                bad = gamma[fin][~np.isfinite(L[fin])][0]
                raise NonFiniteValue(f"H or the noise is not finite at gamma = {bad:g}")
        before = self.grid[None, :] < gamma[:, None]
        values = np.where(before, self.F_grid[None, :], L[:, None])
        # running sup over monitored times strictly before gamma
        k = np.searchsorted(self.mon, gamma, side="left")
        has = k > 0
        sup = np.full(n, -np.inf)
        sup_abs = np.zeros(n)
        sup[has] = self.mon_max[k[has] - 1]
        sup_abs[has] = self.mon_absmax[k[has] - 1]
        var = np.zeros(n)
        terminal = L.copy()
        pos = fin & (gamma > 0)
        if pos.any():
            g = gamma[pos]
            fl = pair.F.F_left(g)
            if not np.all(np.isfinite(fl)):
                raise NonFiniteValue("F(gamma-) is not finite on some path")
            sup[pos] = np.maximum(sup[pos], fl)
            sup_abs[pos] = np.maximum(sup_abs[pos], np.abs(fl))
            iz, _, _ = cumulative(self.absz, d, g)
            at = d.atom_mass(g)
            iz = iz - np.where(at > 0, self.absz(g) * at, 0.0)
            var[pos] = abs(self.F0) + iz + np.abs(L[pos] - fl)
        zero = gamma == 0
        var[zero] = np.abs(L[zero])
        sup[fin] = np.maximum(sup[fin], L[fin])
        sup_abs[fin] = np.maximum(sup_abs[fin], np.abs(L[fin]))
        inf = ~fin
        if inf.any():
            sup[inf] = np.maximum(self.mon_max[-1], self._limit)
            sup_abs[inf] = np.maximum(self.mon_absmax[-1], abs(self._limit))
            var[inf] = self._var_inf
            terminal[inf] = self._limit
        return gamma, L, values, sup, sup_abs, var, terminal


def _monitor(d, n=256):
    return d.validation_grid(n)


def simulate(rep, grid, n_paths=N_PATHS, seed=SEED, workers=1, noise=None):
    """Simulate ``n_paths`` paths of the local martingale ``rep``.

    Parameters
    ----------
    rep : Representation or ConditionMPair
        A bare pair is combined with ``noise`` (zero by default).
    grid : array_like
        Report times inside the support.
    workers : int
        Threads sharing the path range; the report does not depend on it.

    Raises
    ------
    NonFiniteValue
        F or H is not finite where a path needs it.
    """
    from .solver import ConditionMPair, Representation
    if isinstance(rep, ConditionMPair):
        rep = Representation(rep, noise or NoiseSpec.zero())
    if n_paths < 100:
        raise ValueError("n_paths must be at least 100")
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    d = rep.pair.d
    engine = _Engine(rep, grid, _monitor(d), seed)
    bounds = [(s, min(s + _CHUNK, n_paths)) for s in range(0, n_paths, _CHUNK)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: engine.run(*b), bounds))
    else:
        parts = [engine.run(*b) for b in bounds]
    cols = [np.concatenate([p[j] for p in parts]) for j in range(7)]
    gamma, L, values, sup, sup_abs, var, terminal = cols
    stats = [_stats(values[:, j]) for j in range(grid.size)]
    mean = np.array([s[0] for s in stats])
    se = np.array([s[1] for s in stats])
    ms, ss = _stats(sup)
    ma, sa = _stats(sup_abs)
    mv, sv = _stats(var)
    mt, st = _stats(terminal)
    H0 = float(rep.pair.H(np.array([0.0]))[0]) if d.G0 > 0 else 0.0
    expected = rep.pair.F0 * float(d.survival(0.0)) + H0 * d.G0
    return SimulationReport(n_paths, int(seed), grid, mean, se, ms, ss, ma, sa, mv, sv,
                            mt, st, expected, {"workers": workers})


def sample_paths(rep, grid, indices, seed=SEED):
    """The paths with the given indices, as :class:`PathSample` records."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    engine = _Engine(rep, grid, _monitor(rep.pair.d), seed)
    out = []
    for i in indices:
        gamma, L, values, _, sup_abs, var, _ = engine.run(int(i), int(i) + 1)
        out.append(PathSample(float(gamma[0]), float(L[0]),
                              list(zip(grid.tolist(), values[0].tolist())),
                              float(sup_abs[0]), float(var[0])))
    return out


@dataclass
class TypeDiagnostic:
    """Sample-based evidence for a martingale type.

    ``consistent`` is None when the sample cannot speak to the type.
    ``confidence`` is ``"statistical"`` for 4-SE comparisons and
    ``"heuristic"`` for growth checks that cannot certify an infinite mean.
    """

    expected: str
    consistent: object
    confidence: str
    details: dict = field(default_factory=dict)


def empirical_type_diagnostics(report, expected, followup=None, n_se=4.0):
    """Check a report against the analytic type ``expected``.

    Type2a/2b compare E M_inf with E M_0.  Type4 needs a ``followup`` report
    with more paths and checks that E Var(M)_inf agrees within 2 SE.  Type3
    checks, heuristically, that E sup|M| keeps growing in the followup.
    """
    tag = getattr(expected, "tag", expected)
    gap = report.mean_terminal - report.expected_M0
    details = {"E_M_inf": report.mean_terminal, "E_M0": report.expected_M0,
               "se_M_inf": report.se_terminal}
    if tag in ("Type2a", "Type2b"):
        sign = -1.0 if tag == "Type2a" else 1.0
        ok = sign * gap > n_se * report.se_terminal
        return TypeDiagnostic(tag, bool(ok), "statistical", details)
    if tag == "Type4":
        if followup is None:
            return TypeDiagnostic(tag, None, "statistical", {**details, "note": "needs followup"})
        diff = abs(followup.mean_variation - report.mean_variation)
        band = 2.0 * math.hypot(report.se_variation, followup.se_variation)
        # roundoff floor for samples whose variation is (nearly) constant
        band += 1e-12 * (1.0 + abs(report.mean_variation))
        details.update(var_small=report.mean_variation, var_large=followup.mean_variation,
                       band=band)
        ok = diff <= band
        return TypeDiagnostic(tag, bool(ok), "statistical", details)
    if tag == "Type3":
        if followup is None:
            return TypeDiagnostic(tag, None, "heuristic", {**details, "note": "needs followup"})
        details.update(sup_small=report.mean_sup_abs, sup_large=followup.mean_sup_abs)
        return TypeDiagnostic(tag, bool(followup.mean_sup_abs > report.mean_sup_abs),
                              "heuristic", details)
    return TypeDiagnostic(tag, None, "heuristic", {**details, "note": "no sample criterion"})
