"""Pairs (F, H) that define a single-jump local martingale, and what they imply.

A process that is constant before and after one jump at time gamma is written

    M_t = F(t)                 on t < gamma,
    M_t = H(gamma) + L'        on t >= gamma,

with a deterministic pre-jump path F, a deterministic post-jump level H and a
conditionally centred noise L'.  M is a local martingale exactly when F is
absolutely continuous with respect to dG and the balance

    F(t) Gbar(t) + int_(0,t] H dG = F(0) Gbar(0)

holds on the support (plus lim F = H(t_G) when the support ends with an atom).
This module solves the balance in either direction, checks it, and reads off
global properties of M from F, H and the noise.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (CaseBNonIntegrable, ConfigValidationError, IndeterminateLimit,
                     NotLocallyIntegrable)
from .functions import RealFunction, as_function, const, from_config
from .integrate import (cumulative, improper_integral, local_integrability, tail_cumulative)
from .settings import EPS_FLOOR, EPSABS, EPSREL, GRID_SIZE, SIGN_TOL, VERIFY_TOL

TYPES = ("Type1", "Type2a", "Type2b", "Type3", "Type4")


class SigmaStatus(str, Enum):
    LOCAL = "LocalMartingale"
    STRICT_SIGMA = "StrictlySigma"
    NOT_SIGMA = "NotSigma"

    def __str__(self):
        return self.value


# pre-jump path ------------------------------------------------------------------


class DerivativePair:
    """Pre-jump path F(t) = F0 + int_(0,t] z dG on [0, t_G).

    Parameters
    ----------
    F0 : float
        F(0).
    z : RealFunction
        Density dF/dG on (0, t_G).
    d : Distribution
        Law of the jump time.
    closed : callable, optional
        Vectorised evaluator of F on (0, t_G) that agrees with the integral
        form.  Solvers supply one because it is cheaper and more accurate.
    limit : float, optional
        Known value of lim F(t) as t increases to t_G.
    validate : bool
        Check that z is locally integrable (integrable on (0, t_G) in Case B).

    Notes
    -----
    Beyond the support F is set to 0 in Case A and to its limit in Case B.
    """

    def __init__(self, F0, z, d, closed=None, limit=None, validate=True,
                 epsabs=EPSABS, epsrel=EPSREL):
        self.F0 = float(F0)
        self.z = as_function(z)
        self.d = d
        self._closed = closed
        self._limit = limit
        self.epsabs = epsabs
        self.epsrel = epsrel
        if validate:
            self._validate()

    def _validate(self):
        ok, diag = local_integrability(self.z, self.d, self.epsabs, self.epsrel)
        if not ok:
            cls = CaseBNonIntegrable if self.case.is_B else NotLocallyIntegrable
            raise cls(f"dF/dG = {self.z.label} is not integrable against dG on the support")

    @property
    def case(self):
        return self.d.endpoint_case()

    def _split(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t > 0) & (t < self.d.t_G)
        return t, inside

    def _outside(self, t, out):
        out[t <= 0] = self.F0
        beyond = t >= self.d.t_G
        if beyond.any():
            out[beyond] = self.limit() if self.case.is_B else 0.0
        return out

    def F_integral(self, t):
        """F(t) computed as F0 + int_(0,t] z dG, ignoring any closed form."""
        t, inside = self._split(t)
        out = np.zeros(t.shape)
        if inside.any():
            v, _, _ = cumulative(self.z, self.d, t[inside], epsabs=self.epsabs,
                                 epsrel=self.epsrel)
            out[inside] = self.F0 + v
        return self._outside(t, out)

    def F(self, t):
        if self._closed is None:
            return self.F_integral(t)
        t, inside = self._split(t)
        out = np.zeros(t.shape)
        if inside.any():
            out[inside] = self._closed(t[inside])
        return self._outside(t, out)

    __call__ = F

    def F_left(self, t):
        """F(t-): F(t) minus the jump z(t) dG({t}) at an atom."""
        t, inside = self._split(t)
        out = self.F(t)
        at = inside & (self.d.atom_mass(t) > 0)
        if at.any():
            out[at] -= self.z(t[at]) * self.d.atom_mass(t[at])
        if self.case.is_B:
            out[t == self.d.t_G] = self.limit()
        return out

    def limit(self):
        """lim F(t) as t increases to t_G; NaN when the integral of z diverges."""
        if self._limit is None:
            r = improper_integral(self.z, self.d, epsabs=self.epsabs, epsrel=self.epsrel)
            self._limit = self.F0 + r.value if r.converged else math.nan
        return self._limit

    def scale(self, c):
        c = float(c)
        closed = None if self._closed is None else (lambda t: c * self._closed(t))
        limit = None if self._limit is None else c * self._limit
        return DerivativePair(c * self.F0, self.z * c, self.d, closed, limit, validate=False,
                              epsabs=self.epsabs, epsrel=self.epsrel)

    def __add__(self, other):
        if other.d is not self.d:
            raise ValueError("cannot add pre-jump paths built on different laws")
        closed = None
        if self._closed is not None and other._closed is not None:
            closed = lambda t: self._closed(t) + other._closed(t)  # noqa: E731
        limit = None
        if self._limit is not None and other._limit is not None:
            limit = self._limit + other._limit
        return DerivativePair(self.F0 + other.F0, self.z + other.z, self.d, closed, limit,
                              validate=False, epsabs=self.epsabs, epsrel=self.epsrel)

    def __repr__(self):
        return f"DerivativePair(F0={self.F0:g}, z={self.z.label})"


class ConditionMPair:
    """Pre-jump path ``F`` together with the post-jump level ``H``."""

    def __init__(self, F, H):
        self.F = F
        self.H = as_function(H)

    @property
    def d(self):
        return self.F.d

    @property
    def case(self):
        return self.F.case

    @property
    def F0(self):
        return self.F.F0

    @classmethod
    def constant(cls, c, d):
        return cls(DerivativePair(c, const(0.0), d, closed=lambda t: np.full_like(t, c),
                                  limit=float(c), validate=False), const(c))

    @classmethod
    def zero(cls, d):
        return cls.constant(0.0, d)

    def scale(self, c):
        return ConditionMPair(self.F.scale(c), self.H * float(c))

    def __add__(self, other):
        return ConditionMPair(self.F + other.F, self.H + other.H)

    def __neg__(self):
        return self.scale(-1.0)

    def __repr__(self):
        return f"ConditionMPair({self.F!r}, H={self.H.label}, {self.case})"


# noise ------------------------------------------------------------------------------


@dataclass(frozen=True)
class NoiseSpec:
    """Conditionally centred jump noise L' = J(gamma) * Y with E|Y| = 1.

    ``kind`` is ``zero``, ``two_point`` (Y = +-1 with equal odds) or
    ``mixture`` (Y takes ``values`` with ``probs``; rescaled so E|Y| = 1).
    ``J`` is then exactly E[|L'| | gamma = t].
    """

    kind: str = "zero"
    J: RealFunction = None
    values: tuple = ()
    probs: tuple = ()

    def __post_init__(self):
        if self.kind == "zero":
            object.__setattr__(self, "J", const(0.0))
        elif self.kind == "two_point":
            object.__setattr__(self, "J", as_function(self.J))
            object.__setattr__(self, "values", (-1.0, 1.0))
            object.__setattr__(self, "probs", (0.5, 0.5))
        elif self.kind == "mixture":
            v = np.asarray(self.values, dtype=float)
            p = np.asarray(self.probs, dtype=float)
            if v.shape != p.shape or v.size < 2 or np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
                raise ValueError("mixture needs matching values and probabilities summing to 1")
            if abs(math.fsum(v * p)) > 1e-12:
                raise ValueError("mixture noise must have mean zero")
            m = math.fsum(np.abs(v) * p)
            if m <= 0:
                raise ValueError("mixture noise must not vanish")
            object.__setattr__(self, "J", as_function(self.J))
            object.__setattr__(self, "values", tuple((v / m).tolist()))
            object.__setattr__(self, "probs", tuple(p.tolist()))
        else:
            raise ValueError(f"unknown noise kind {self.kind!r}")

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def two_point(cls, J):
        return cls("two_point", J)

    @classmethod
    def mixture(cls, J, values, probs):
        return cls("mixture", J, tuple(values), tuple(probs))

    @property
    def is_zero(self):
        return self.kind == "zero"

    def scale(self, c):
        c = float(c)
        if self.is_zero or c == 0:
            return NoiseSpec.zero()
        if self.kind == "two_point":
            return NoiseSpec.two_point(self.J * abs(c))
        vals = [v * math.copysign(1.0, c) for v in self.values]
        return NoiseSpec.mixture(self.J * abs(c), vals, self.probs)

    def sample(self, gamma, u):
        """L' for jump times ``gamma`` and uniforms ``u`` (same shape)."""
        gamma = np.asarray(gamma, dtype=float)
        if self.is_zero:
            return np.zeros(gamma.shape)
        cum = np.cumsum(self.probs)
        k = np.minimum(np.searchsorted(cum, u, side="right"), len(self.values) - 1)
        y = np.asarray(self.values)[k]
        out = np.zeros(gamma.shape)
        fin = np.isfinite(gamma)
        out[fin] = self.J(gamma[fin]) * y[fin]
        return out

    def config(self):
        if self.is_zero:
            return {"kind": "zero"}
        block = {"kind": self.kind, "J": self.J.config}
        if self.kind == "mixture":
            block.update(values=list(self.values), probs=list(self.probs))
        return block


def noise_from_config(block, where="noise"):
    if block is None:
        return NoiseSpec.zero()
    if not isinstance(block, dict) or "kind" not in block:
        raise ConfigValidationError(f"{where}: expected an object with a 'kind' key")
    kind = block["kind"]
    allowed = {"zero": {"kind"}, "two_point": {"kind", "J"},
               "mixture": {"kind", "J", "values", "probs"}}
    if kind not in allowed:
        raise ConfigValidationError(f"{where}: unknown noise kind {kind!r}")
    unknown = set(block) - allowed[kind]
    missing = allowed[kind] - set(block)
    if unknown or missing:
        raise ConfigValidationError(
            [f"{where}: unknown key(s) {sorted(unknown)}"] * bool(unknown)
            + [f"{where}: missing key(s) {sorted(missing)}"] * bool(missing))
    if kind == "zero":
        return NoiseSpec.zero()
    J = from_config(block["J"], where + ".J")
    try:
        if kind == "two_point":
            return NoiseSpec.two_point(J)
        return NoiseSpec.mixture(J, block["values"], block["probs"])
    except ValueError as exc:
        raise ConfigValidationError(f"{where}: {exc}") from None


@dataclass(frozen=True)
class Representation:
    """A pair and a noise: the full description of one local martingale."""

    pair: ConditionMPair
    noise: NoiseSpec

    def value(self, t, gamma, lprime):
        """M_t for jump times ``gamma`` with noise draws ``lprime`` (broadcast).

        ``lprime`` is ignored when the noise is zero.
        """
        t, gamma, lprime = np.broadcast_arrays(np.asarray(t, float), np.asarray(gamma, float),
                                               np.asarray(lprime, float))
        out = np.empty(t.shape)
        before = t < gamma
        out[before] = self.pair.F(t[before])
        after = ~before
        out[after] = self.pair.H(gamma[after])
        if not self.noise.is_zero:
            out[after] += lprime[after]
        return out


# solving the balance ---------------------------------------------------------------


def _require_local(h, d, epsabs, epsrel, what):
    ok, diag = local_integrability(h, d, epsabs, epsrel)
    if ok:
        return diag
    if d.endpoint_case().is_B:
        raise CaseBNonIntegrable(f"{what} is not integrable against dG over (0, t_G]")
    raise NotLocallyIntegrable(f"{what} is not integrable against dG on a compact of the support")


def solve_F_from_H(H, d, F0=None, epsabs=EPSABS, epsrel=EPSREL):
    """Pre-jump path that balances the post-jump level ``H``.

    F(t) = [F0 Gbar(0) - int_(0,t] H dG] / Gbar(t).  In Case A ``F0`` is free
    and must be given; in Case B it is forced to Gbar(0)^-1 int_(0,t_G] H dG
    and any value passed in is ignored.

    Raises
    ------
    NotLocallyIntegrable
        H is not dG-integrable on some compact of the support.
    CaseBNonIntegrable
        Case B and H is not integrable over the closed support.
    """
    H = as_function(H)
    case = d.endpoint_case()
    _require_local(H, d, epsabs, epsrel, f"H = {H.label}")
    g0 = float(d.survival(0.0))
    total = improper_integral(H, d, epsabs=epsabs, epsrel=epsrel)
    if case.is_B:
        end_term = float(H(np.array([d.t_G]))[0]) * d.atom_mass(d.t_G)
        F0 = math.fsum([total.value, end_term]) / g0
        C = end_term  # lim F Gbar, exact by the choice of F0
    else:
        if F0 is None:
            raise ValueError("Case A needs the initial value F0")
        F0 = float(F0)
        C = F0 * g0 - total.value if total.converged else None
    c0 = F0 * g0
    # Head form below the median of the density part, tail form above it.
    split = math.inf
    if C is not None and d.pieces:
        split = float(d.continuous_quantile(np.array([0.5]))[0])

    def closed(t):
        out = np.empty(t.shape)
        head = t <= split
        if head.any():
            v, _, _ = cumulative(H, d, t[head], epsabs=epsabs, epsrel=epsrel)
            out[head] = (c0 - v) / d.survival(t[head])
        tail = ~head
        if tail.any():
            v, _, _ = tail_cumulative(H, d, t[tail], epsabs=epsabs, epsrel=epsrel)
            out[tail] = (C + v) / d.survival(t[tail])
        return out

    limit = None
    if case.is_B:
        limit = C / d.atom_mass(d.t_G)

    def z_fn(t):
        # dF/dG only matters on (0, t_G)
        inside = (t > 0) & (t < d.t_G)
        out = np.zeros(t.shape)
        ti = t[inside]
        out[inside] = (closed(ti) - H(ti)) / d.survival_left(ti)
        return out

    z = RealFunction(z_fn, f"dF/dG[{H.label}]")
    F = DerivativePair(F0, z, d, closed=closed, limit=limit, validate=False,
                       epsabs=epsabs, epsrel=epsrel)
    return ConditionMPair(F, H)


def solve_H_from_F(F):
    """Post-jump level that makes the pre-jump path ``F`` a local martingale.

    H(t) = F(t) - Gbar(t-) dF/dG(t) on (0, t_G), H(0) = F0 by convention and,
    in Case B, H(t_G) = lim F.  Beyond the support H is 0.
    """
    d = F.d
    case = F.case

    def h_fn(t):
        out = np.zeros(t.shape)
        inside = (t > 0) & (t < d.t_G)
        ti = t[inside]
        if ti.size:
            out[inside] = F.F(ti) - d.survival_left(ti) * F.z(ti)
        out[t == 0] = F.F0
        if case.is_B:
            out[t == d.t_G] = F.limit()
        return out

    return ConditionMPair(F, RealFunction(h_fn, f"H[{F.z.label}]"))


# checks -----------------------------------------------------------------------------


@dataclass
class ConditionMReport:
    """Residuals of the balance equation on a validation grid.

    ``residuals[i]`` is F(t)Gbar(t) + int_(0,t] H dG - F0 Gbar(0) at
    ``grid[i]``, with F taken in its integral form.  ``endpoint_mismatch`` is
    |lim F - H(t_G)| in Case B and 0 otherwise.
    """

    grid: np.ndarray
    residuals: np.ndarray
    max_residual: float
    endpoint_mismatch: float
    tol: float
    passed: bool
    notes: list = field(default_factory=list)


def verify_condition_m(pair, grid_size=GRID_SIZE, tol=VERIFY_TOL, eps_floor=EPS_FLOOR,
                       grid=None, epsabs=EPSABS, epsrel=EPSREL):
    """Check the balance equation for ``pair``; never raises on failure."""
    d = pair.d
    if grid is None:
        grid = d.validation_grid(grid_size, eps_floor)
    grid = np.asarray(grid, dtype=float)
    notes = []
    g0 = float(d.survival(0.0))
    try:
        F = pair.F.F_integral(grid)
        IH, _, _ = cumulative(pair.H, d, grid, epsabs=epsabs, epsrel=epsrel)
        res = F * d.survival(grid) + IH - pair.F0 * g0
        mismatch = 0.0
        if pair.case.is_B:
            tG = np.array([d.t_G])
            whole, _, _ = cumulative(pair.H, d, tG, epsabs=epsabs, epsrel=epsrel)
            res = np.append(res, whole[0] - pair.F0 * g0)
            grid = np.append(grid, d.t_G)
            lim = pair.F0 + improper_integral(pair.F.z, d, epsabs=epsabs, epsrel=epsrel).value
            mismatch = abs(lim - float(pair.H(tG)[0]))
    except Exception as exc:  # reports, never throws
        notes.append(f"evaluation failed: {exc}")
        res = np.full(grid.shape, np.nan)
        mismatch = math.nan
    finite = np.all(np.isfinite(res)) and math.isfinite(mismatch)
    worst = float(np.max(np.abs(res))) if res.size and finite else (0.0 if finite else math.inf)
    if not finite:
        notes.append("non-finite residual")
        mismatch = mismatch if math.isfinite(mismatch) else math.inf
    passed = bool(finite and worst <= tol and mismatch <= tol)
    return ConditionMReport(grid, res, worst, float(mismatch), tol, passed, notes)


@dataclass
class MartingaleVerdict:
    """Outcome of the martingale criterion: E|M_t| finite and E M_t constant."""

    holds: bool
    integrable: bool
    mean_invariant: bool
    report: ConditionMReport
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


def verify_martingale_property(pair, noise=None, grid=None, tol=VERIFY_TOL,
                               epsabs=EPSABS, epsrel=EPSREL):
    """E|M_t| < infinity for t in the support, and the balance equation."""
    noise = noise or NoiseSpec.zero()
    d = pair.d
    details = {}
    h_ok, details["H"] = local_integrability(pair.H, d, epsabs, epsrel)
    j_ok = True
    if not noise.is_zero:
        j_ok, details["J"] = local_integrability(noise.J, d, epsabs, epsrel)
    at0 = True
    if d.G0 > 0:
        zero = np.array([0.0])
        at0 = bool(np.isfinite(pair.H(zero)[0]) and np.isfinite(noise.J(zero)[0]))
    report = verify_condition_m(pair, tol=tol, grid=grid, epsabs=epsabs, epsrel=epsrel)
    integrable = bool(h_ok and j_ok and at0 and np.all(np.isfinite(report.residuals)))
    details.update(H_ok=h_ok, J_ok=j_ok, atom_at_zero_ok=at0)
    return MartingaleVerdict(integrable and report.passed, integrable, report.passed,
                             report, details)


def decompose(pair, noise):
    """Split M into the part driven by (F, H) and the pure-noise part.

    Returns two :class:`Representation`\\ s: (F, H, zero noise) and
    (0, 0, noise).  Their values add up to M path by path.
    """
    return (Representation(pair, NoiseSpec.zero()),
            Representation(ConditionMPair.zero(pair.d), noise))


# classification --------------------------------------------------------------------


@dataclass(frozen=True)
class MartingaleType:
    """Global type of M with the evidence behind it.

    Type1: no limit M_infinity in L1.  Type2a/2b: closed super-/sub-martingale
    but not a martingale.  Type3: uniformly integrable martingale whose
    supremum is not integrable.  Type4: sup |M_t| integrable.
    """

    tag: str
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __str__(self):
        return self.tag


def _verdict(declared, key, compute):
    if declared and key in declared:
        v = declared[key]
        return {"converged": v == "convergent", "value": None, "source": "declared"}
    r = compute()
    return {"converged": r.converged, "value": r.value, "source": "numeric"}


def classify(pair, noise=None, sign_tol=SIGN_TOL, declared=None, epsabs=EPSABS, epsrel=EPSREL):
    """Global type of the local martingale given by ``pair`` and ``noise``.

    Parameters
    ----------
    declared : dict, optional
        Overrides for the three improper integrals that drive the decision,
        keys ``"J"``, ``"H"`` (for |H|) and ``"H1"`` (for Gbar |dF/dG|), values
        ``"convergent"`` or ``"divergent"``; key ``"lim"`` with a number gives
        lim F Gbar analytically.  Needed when an integral converges too slowly
        to be resolved in double precision, as it must for type 3.

    Raises
    ------
    IndeterminateLimit
        |lim F Gbar| lies strictly between ``sign_tol`` and ``10 * sign_tol``.
    """
    noise = noise or NoiseSpec.zero()
    d = pair.d
    diag = {"case": str(pair.case), "path": []}
    if pair.case.is_B:
        diag["path"].append("support ends with an atom")
        return MartingaleType("Type4", diag)

    g0a = d.G0

    def abs_total(f):
        def run():
            r = improper_integral(f.abs(), d, epsabs=epsabs, epsrel=epsrel)
            extra = abs(float(f(np.array([0.0]))[0])) * g0a if g0a > 0 else 0.0
            return type(r)(r.value + extra, r.converged and math.isfinite(extra),
                           r.error_estimate, r.diagnostics)
        return run

    if noise.is_zero:
        J = {"converged": True, "value": 0.0, "source": "zero noise"}
    else:
        J = _verdict(declared, "J", abs_total(noise.J))
    Habs = _verdict(declared, "H", abs_total(pair.H))
    diag.update(J_integral=J, H_abs_integral=Habs)
    if not (J["converged"] and Habs["converged"]):
        diag["path"].append("E|L'| or int |H| dG is infinite")
        return MartingaleType("Type1", diag)
    diag["mass_inf"] = d.mass_inf
    if d.mass_inf > 0:
        diag["path"].append("P(gamma = inf) > 0 with integrable jumps")
        return MartingaleType("Type4", diag)
    if declared and "lim" in declared:
        lim = float(declared["lim"])
        diag["lim_source"] = "declared"
    else:
        Hint = improper_integral(pair.H, d, epsabs=epsabs, epsrel=epsrel)
        lim = pair.F0 * float(d.survival(0.0)) - Hint.value
        diag["lim_source"] = "numeric"
    diag["lim_FGbar"] = lim
    if abs(lim) > sign_tol:
        if abs(lim) < 10 * sign_tol:
            raise IndeterminateLimit(
                f"lim F*Gbar = {lim:.3e} is too close to 0 to fix its sign", diag)
        diag["path"].append("lim F*Gbar " + ("> 0" if lim > 0 else "< 0"))
        return MartingaleType("Type2a" if lim > 0 else "Type2b", diag)
    z = pair.F.z
    weighted = RealFunction(lambda t: d.survival(t) * np.abs(z(t)), "Gbar*|dF/dG|",
                            z.declared)
    H1 = _verdict(declared, "H1",
                  lambda: improper_integral(weighted, d, epsabs=epsabs, epsrel=epsrel))
    diag["H1_integral"] = H1
    if H1["converged"]:
        diag["path"].append("lim F*Gbar = 0 and int Gbar |dF/dG| dG < inf")
        return MartingaleType("Type4", diag)
    diag["path"].append("lim F*Gbar = 0 and int Gbar |dF/dG| dG = inf")
    return MartingaleType("Type3", diag)


def sigma_status(pair, noise=None, epsabs=EPSABS, epsrel=EPSREL, n_check=1024):
    """Local martingale, sigma-martingale only, or neither.

    The answer depends on the noise scale J alone: locally integrable J gives
    a local martingale, finite but not locally integrable J a strict
    sigma-martingale, and J infinite on a set charged by dG neither.
    """
    noise = noise or NoiseSpec.zero()
    if noise.is_zero:
        return SigmaStatus.LOCAL
    d = pair.d
    J = noise.J
    pts = [d.atom_t[(d.atom_t > 0) & (d.atom_t <= d.t_G)]]
    if d.pieces:
        pts.append(d.continuous_quantile((np.arange(n_check) + 0.5) / n_check))
    pts = np.concatenate(pts)
    if pts.size and not np.all(np.isfinite(J(pts))):
        return SigmaStatus.NOT_SIGMA
    ok, diag = local_integrability(J, d, epsabs, epsrel)
    if "reason" in diag:  # non-finite at quadrature nodes
        return SigmaStatus.NOT_SIGMA
    if ok and d.G0 > 0 and not np.isfinite(J(np.array([0.0]))[0]):
        ok = False
    return SigmaStatus.LOCAL if ok else SigmaStatus.STRICT_SIGMA


def pair_from_config(block, d, where="pair"):
    """``{"F0": .., "z": {..}}`` gives F and H from the balance;
    ``{"H": {..}, "F0": ..}`` solves for F; giving all three keeps them as is."""
    if not isinstance(block, dict):
        raise ConfigValidationError(f"{where}: expected an object")
    unknown = set(block) - {"F0", "z", "H"}
    if unknown:
        raise ConfigValidationError(f"{where}: unknown key(s) {sorted(unknown)}")
    if "z" in block:
        F = DerivativePair(block.get("F0", 0.0), from_config(block["z"], where + ".z"), d)
        if "H" in block:
            return ConditionMPair(F, from_config(block["H"], where + ".H"))
        return solve_H_from_F(F)
    if "H" in block:
        return solve_F_from_H(from_config(block["H"], where + ".H"), d, block.get("F0"))
    raise ConfigValidationError(f"{where}: needs 'z' or 'H'")
