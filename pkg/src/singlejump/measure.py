"""The law G of the jump time on [0, +inf].

A :class:`Distribution` is a finite list of atoms, a finite list of density
pieces with disjoint interiors and a mass sitting at +inf.  Each density piece
is a normalised shape on ``[a, b)`` multiplied by its ``weight`` (the mass it
carries), so closed-form piece masses give G and its tail without quadrature.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigValidationError, InvalidDistribution
from .settings import EPS_FLOOR, GRID_SIZE, MASS_TOL

INF = math.inf


# density pieces ------------------------------------------------------------


class DensityPiece:
    """Normalised density on ``[a, b)`` times ``weight``."""

    kind = "abstract"

    def __init__(self, a, b, weight):
        self.a = float(a)
        self.b = INF if b is None else float(b)
        self.weight = float(weight)
        if not self.a >= 0.0:
            raise InvalidDistribution(f"{self.kind} piece starts below 0: {self.a}")
        if not self.b > self.a:
            raise InvalidDistribution(f"{self.kind} piece has empty interval [{self.a}, {self.b})")
        if not self.weight >= 0.0:
            raise InvalidDistribution(f"{self.kind} piece has negative weight {self.weight}")

    # normalised shape; subclasses implement _pdf/_cum/_tail/_ppf on [a, b)
    def pdf(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= self.a) & (t < self.b)
        out = np.zeros_like(t)
        out[inside] = self._pdf(t[inside])
        return out

    def cum(self, t):
        """Normalised mass of [a, t]."""
        t = np.asarray(t, dtype=float)
        out = np.where(t >= self.b, 1.0, 0.0)
        inside = (t > self.a) & (t < self.b)
        out[inside] = self._cum(t[inside])
        return out

    def tail(self, t):
        """Normalised mass of (t, b)."""
        t = np.asarray(t, dtype=float)
        out = np.where(t < self.a, 1.0, 0.0)
        inside = (t >= self.a) & (t < self.b)
        out[inside] = self._tail(t[inside])
        return out

    def ppf(self, q):
        q = np.clip(np.asarray(q, dtype=float), 0.0, 1.0)
        return np.clip(self._ppf(q), self.a, self.b)

    def _tail(self, t):
        return 1.0 - self._cum(t)

    def _ppf(self, q):
        return _bisect_ppf(self._cum, self.a, self.b, q)

    def config(self):
        return {"kind": self.kind, "from": self.a,
                "to": None if math.isinf(self.b) else self.b, "weight": self.weight}

    def __repr__(self):
        return f"{type(self).__name__}({self.config()})"


class UniformPiece(DensityPiece):
    kind = "uniform"

    def __init__(self, a, b, weight=1.0):
        super().__init__(a, b, weight)
        if math.isinf(self.b):
            raise InvalidDistribution("uniform piece needs a finite right end")
        self.width = self.b - self.a

    def _pdf(self, t):
        return np.full_like(t, 1.0 / self.width)

    def _cum(self, t):
        return (t - self.a) / self.width

    def _tail(self, t):
        return (self.b - t) / self.width

    def _ppf(self, q):
        return self.a + q * self.width


class ExponentialPiece(DensityPiece):
    """Density proportional to exp(-rate * (t - a)), truncated to [a, b)."""

    kind = "exp"

    def __init__(self, a, b, weight=1.0, rate=1.0):
        super().__init__(a, b, weight)
        self.rate = float(rate)
        if not self.rate > 0:
            raise InvalidDistribution("exp piece needs rate > 0")
        # normalising constant 1 - exp(-rate (b - a)), kept as -expm1 for accuracy
        self.z = 1.0 if math.isinf(self.b) else -math.expm1(-self.rate * (self.b - self.a))

    def _pdf(self, t):
        return self.rate * np.exp(-self.rate * (t - self.a)) / self.z

    def _cum(self, t):
        return -np.expm1(-self.rate * (t - self.a)) / self.z

    def _tail(self, t):
        far = 0.0 if math.isinf(self.b) else math.exp(-self.rate * (self.b - self.a))
        return (np.exp(-self.rate * (t - self.a)) - far) / self.z

    def _ppf(self, q):
        return self.a - np.log1p(-q * self.z) / self.rate

    def config(self):
        return {**super().config(), "rate": self.rate}


class PowerPiece(DensityPiece):
    """Density proportional to (b - t)**alpha on [a, b), alpha > -1."""

    kind = "power"

    def __init__(self, a, b, weight=1.0, alpha=0.0):
        super().__init__(a, b, weight)
        self.alpha = float(alpha)
        if math.isinf(self.b):
            raise InvalidDistribution("power piece needs a finite right end")
        if not self.alpha > -1.0:
            raise InvalidDistribution("power piece needs alpha > -1")
        self.width = self.b - self.a

    def _pdf(self, t):
        k = self.alpha + 1.0
        return k * ((self.b - t) / self.width) ** self.alpha / self.width

    def _cum(self, t):
        return 1.0 - self._tail(t)

    def _tail(self, t):
        return ((self.b - t) / self.width) ** (self.alpha + 1.0)

    def _ppf(self, q):
        return self.b - self.width * (1.0 - q) ** (1.0 / (self.alpha + 1.0))

    def config(self):
        return {**super().config(), "alpha": self.alpha}


class PolyPiece(DensityPiece):
    """Density proportional to a polynomial in t (increasing-degree coefficients)."""

    kind = "poly"

    def __init__(self, a, b, weight=1.0, coeffs=(1.0,)):
        super().__init__(a, b, weight)
        if math.isinf(self.b):
            raise InvalidDistribution("poly piece needs a finite right end")
        P = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
        probe = P(np.linspace(self.a, self.b, 1025))
        if np.any(probe < 0):
            raise InvalidDistribution("poly piece density is negative somewhere on its interval")
        self.coeffs = [float(c) for c in coeffs]
        self.P = P
        self.anti = P.integ(lbnd=self.a)
        self.z = float(self.anti(self.b))
        if not self.z > 0:
            raise InvalidDistribution("poly piece density integrates to zero")

    def _pdf(self, t):
        return self.P(t) / self.z

    def _cum(self, t):
        return self.anti(t) / self.z

    def config(self):
        return {**super().config(), "coeffs": self.coeffs}


class TablePiece(DensityPiece):
    """Piecewise linear density through (ts, vs), spanning [ts[0], ts[-1])."""

    kind = "table"

    def __init__(self, ts, vs, weight=1.0):
        ts = np.asarray(ts, dtype=float)
        vs = np.asarray(vs, dtype=float)
        if ts.ndim != 1 or ts.shape != vs.shape or ts.size < 2:
            raise InvalidDistribution("table piece needs matching ts/vs of length >= 2")
        if not np.all(np.diff(ts) > 0):
            raise InvalidDistribution("table piece ts must be strictly increasing")
        if np.any(vs < 0):
            raise InvalidDistribution("table piece density must be nonnegative")
        super().__init__(ts[0], ts[-1], weight)
        self.ts, self.vs = ts, vs
        cells = 0.5 * (vs[1:] + vs[:-1]) * np.diff(ts)
        self.z = float(cells.sum())
        if not self.z > 0:
            raise InvalidDistribution("table piece density integrates to zero")
        self.cell_cum = np.concatenate([[0.0], np.cumsum(cells)])

    def _pdf(self, t):
        return np.interp(t, self.ts, self.vs) / self.z

    def _cum(self, t):
        i = np.clip(np.searchsorted(self.ts, t, side="right") - 1, 0, self.ts.size - 2)
        t0, v0 = self.ts[i], self.vs[i]
        slope = (self.vs[i + 1] - v0) / (self.ts[i + 1] - t0)
        dt = t - t0
        return (self.cell_cum[i] + v0 * dt + 0.5 * slope * dt * dt) / self.z

    def config(self):
        return {"kind": self.kind, "ts": self.ts.tolist(), "vs": self.vs.tolist(),
                "weight": self.weight}


def _bisect_ppf(cum, a, b, q, iters=80):
    lo = np.full_like(q, a)
    hi = np.full_like(q, b)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below = cum(mid) < q
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return hi


# the law ---------------------------------------------------------------------


@dataclass(frozen=True)
class EndpointCase:
    """Right endpoint t_G of the support and whether an atom sits on it."""

    tag: str  # "A" or "B"
    t_G: float

    @property
    def is_B(self):
        return self.tag == "B"

    @property
    def support(self):
        """The set of times with P(gamma >= t) > 0, as (0, t_G, closed)."""
        return (0.0, self.t_G, self.is_B)

    def __str__(self):
        bracket = "]" if self.is_B else ")"
        return f"Case{self.tag}(T=[0, {self.t_G:g}{bracket})"


class Distribution:
    """Mixed law of the jump time on [0, +inf].

    Parameters
    ----------
    atoms : sequence of (t, p) or dict
        Atom locations (>= 0, finite) and masses in (0, 1].
    pieces : sequence of DensityPiece
        Density parts with disjoint interiors.
    mass_inf : float
        P(gamma = +inf).
    renormalize : bool
        Rescale all masses to total one instead of rejecting a mismatch.
    """

    def __init__(self, atoms=(), pieces=(), mass_inf=0.0, renormalize=False, tol=MASS_TOL):
        if isinstance(atoms, dict):
            atoms = atoms.items()
        atoms = sorted((float(t), float(p)) for t, p in atoms)
        self.pieces = tuple(sorted((pc for pc in pieces if pc.weight > 0), key=lambda pc: pc.a))
        self.mass_inf = float(mass_inf)
        at = np.array([t for t, _ in atoms], dtype=float)
        ap = np.array([p for _, p in atoms], dtype=float)
        if at.size and (np.any(at < 0) or not np.all(np.isfinite(at))):
            raise InvalidDistribution("atom locations must be finite and >= 0")
        if at.size > 1 and not np.all(np.diff(at) > 0):
            raise InvalidDistribution("atom locations must be strictly increasing")
        if ap.size and np.any((ap <= 0) | (ap > 1)):
            raise InvalidDistribution("atom masses must lie in (0, 1]")
        if not 0.0 <= self.mass_inf <= 1.0:
            raise InvalidDistribution("mass at infinity must lie in [0, 1]")
        for p, q in zip(self.pieces, self.pieces[1:]):
            if q.a < p.b:
                raise InvalidDistribution(f"density pieces overlap: {p} and {q}")
        total = math.fsum(ap) + math.fsum(pc.weight for pc in self.pieces) + self.mass_inf
        if renormalize:
            if not total > 0:
                raise InvalidDistribution("cannot renormalize a zero measure")
            ap = ap / total
            for pc in self.pieces:
                pc.weight /= total
            self.mass_inf /= total
        elif abs(total - 1.0) > tol:
            raise InvalidDistribution(f"total mass is {total!r}, expected 1")
        self.atom_t = at
        self.atom_p = ap
        self._atom_cum = np.cumsum(ap)
        self._atom_tail = np.cumsum(ap[::-1])[::-1]  # mass of atoms at index >= i
        self._endpoint = self._find_endpoint()
        if not self.survival(0.0) > 0:
            raise InvalidDistribution("P(gamma > 0) must be positive")
        self._build_quantile_table()

    # constructors ----------------------------------------------------------

    @classmethod
    def uniform(cls, a=0.0, b=1.0):
        return cls(pieces=[UniformPiece(a, b, 1.0)])

    @classmethod
    def exponential(cls, rate=1.0, weight=None, mass_inf=0.0):
        weight = 1.0 - mass_inf if weight is None else weight
        return cls(pieces=[ExponentialPiece(0.0, None, weight, rate)], mass_inf=mass_inf)

    @classmethod
    def atomic(cls, atoms, mass_inf=0.0):
        return cls(atoms=atoms, mass_inf=mass_inf)

    # basic queries ------------------------------------------------------

    @property
    def is_atomic(self):
        return not self.pieces

    @property
    def t_G(self):
        return self._endpoint.t_G

    def endpoint_case(self):
        return self._endpoint

    def _find_endpoint(self):
        if self.mass_inf > 0:
            return EndpointCase("A", INF)
        ends = [pc.b for pc in self.pieces]
        if self.atom_t.size:
            ends.append(self.atom_t[-1])
        t_G = max(ends)
        if math.isfinite(t_G) and self.atom_mass(t_G) > 0:
            return EndpointCase("B", t_G)
        return EndpointCase("A", t_G)

    def atom_mass(self, t):
        """Mass of the atom at ``t`` (zero where there is none)."""
        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros_like(t)
        if self.atom_t.size:
            idx = np.clip(np.searchsorted(self.atom_t, t), 0, self.atom_t.size - 1)
            hit = self.atom_t[idx] == t
            out[hit] = self.atom_p[idx[hit]]
        return float(out[0]) if scalar else out

    def cdf(self, t):
        """G(t) = P(gamma <= t), right-continuous."""
        return self._eval(t, self._cdf)

    def survival(self, t):
        """Gbar(t) = P(gamma > t)."""
        return self._eval(t, self._survival)

    def survival_left(self, t):
        """Gbar(t-) = P(gamma >= t)."""
        return self._eval(t, lambda x: self._survival(x) + self.atom_mass(x))

    def pdf(self, t):
        """Density of the absolutely continuous part."""
        return self._eval(t, lambda x: sum((pc.weight * pc.pdf(x) for pc in self.pieces),
                                           np.zeros_like(x)))

    @staticmethod
    def _eval(t, fn):
        scalar = np.ndim(t) == 0
        x = np.atleast_1d(np.asarray(t, dtype=float))
        out = fn(x)
        return float(out[0]) if scalar else out

    def _cdf(self, t):
        out = np.zeros_like(t)
        if self.atom_t.size:
            k = np.searchsorted(self.atom_t, t, side="right")
            out += np.where(k > 0, self._atom_cum[np.maximum(k - 1, 0)], 0.0)
        for pc in self.pieces:
            out += pc.weight * pc.cum(t)
        out[np.isposinf(t)] = 1.0 - self.mass_inf
        return out

    def _survival(self, t):
        out = np.full_like(t, self.mass_inf)
        if self.atom_t.size:
            k = np.searchsorted(self.atom_t, t, side="right")
            ext = np.append(self._atom_tail, 0.0)
            out += ext[k]
        for pc in self.pieces:
            out += pc.weight * pc.tail(t)
        out[np.isposinf(t)] = self.mass_inf
        return out

    @property
    def G0(self):
        """P(gamma = 0)."""
        return self.atom_mass(0.0)

    def finite_open_mass_right(self, t):
        """Mass of (t, t_G), i.e. the tail without the endpoint atom and +inf."""
        end_atom = self.atom_mass(self.t_G) if self._endpoint.is_B else 0.0
        return np.maximum(self.survival(t) - self.mass_inf - end_atom, 0.0)

    # quantiles --------------------------------------------------------------

    def _build_quantile_table(self):
        xs = set(self.atom_t.tolist())
        for pc in self.pieces:
            xs.add(pc.a)
            xs.add(pc.b)
        xs.add(INF)
        xs = np.array(sorted(xs))
        self._qx = xs
        self._qG = self._cdf(xs.copy())
        self._qG[-1] = 1.0
        self._qGl = self._qG - np.append(self.atom_mass(xs[:-1]), self.mass_inf)
        # active piece on each segment (x_k, x_{k+1})
        seg_piece = np.full(xs.size - 1, -1)
        for j, pc in enumerate(self.pieces):
            seg_piece[(xs[:-1] >= pc.a) & (xs[1:] <= pc.b)] = j
        self._qseg = seg_piece

    def sample(self, u):
        """Generalized inverse inf{t : G(t) >= u}; +inf for u > 1 - P(gamma = inf)."""
        scalar = np.ndim(u) == 0
        u = np.atleast_1d(np.asarray(u, dtype=float))
        xs, Gx, Gl = self._qx, self._qG, self._qGl
        k = np.minimum(np.searchsorted(Gx, u, side="left"), xs.size - 1)
        out = np.array(xs[k], dtype=float)
        # u strictly below the left limit at x_k falls inside segment k-1
        inside = (u <= Gl[k]) & (k > 0)
        for seg in np.unique(k[inside] - 1):
            j = self._qseg[seg]
            sel = inside & (k - 1 == seg)
            if j < 0:
                out[sel] = xs[seg + 1]
                continue
            pc = self.pieces[j]
            base = float(pc.cum(np.array([xs[seg]]))[0])
            q = base + (u[sel] - Gx[seg]) / pc.weight
            out[sel] = np.clip(pc.ppf(q), xs[seg], xs[seg + 1])
        out[u > 1.0 - self.mass_inf] = INF
        return float(out[0]) if scalar else out

    quantile = sample

    def continuous_quantile(self, levels):
        """Quantiles of the normalised absolutely continuous part."""
        levels = np.asarray(levels, dtype=float)
        weights = np.array([pc.weight for pc in self.pieces])
        if not weights.size:
            return np.empty(0)
        cum = np.concatenate([[0.0], np.cumsum(weights)]) / weights.sum()
        j = np.clip(np.searchsorted(cum, levels, side="right") - 1, 0, weights.size - 1)
        out = np.empty_like(levels)
        for jj in np.unique(j):
            sel = j == jj
            q = (levels[sel] - cum[jj]) / (cum[jj + 1] - cum[jj])
            out[sel] = self.pieces[jj].ppf(q)
        return out

    def validation_grid(self, n=GRID_SIZE, eps_floor=EPS_FLOOR):
        """Atoms in [0, t_G) plus ``n`` quantile-spaced points of the density part,
        keeping only times with Gbar(t) >= eps_floor."""
        pts = [self.atom_t[self.atom_t < self.t_G]]
        if self.pieces:
            pts.append(self.continuous_quantile((np.arange(n) + 0.5) / n))
        grid = np.unique(np.concatenate(pts + [np.array([0.0])]))
        grid = grid[(grid < self.t_G) & np.isfinite(grid)]
        return grid[self.survival(grid) >= eps_floor]

    # config -------------------------------------------------------------------

    def config(self):
        return {"atoms": [[float(t), float(p)] for t, p in zip(self.atom_t, self.atom_p)],
                "pieces": [pc.config() for pc in self.pieces],
                "mass_inf": self.mass_inf}

    def __repr__(self):
        return f"Distribution({self.config()})"


_PIECE_KEYS = {
    "uniform": ({"from", "to"}, {"weight"}),
    "const": ({"from", "to"}, {"weight"}),
    "exp": ({"rate"}, {"from", "to", "weight"}),
    "power": ({"alpha", "to"}, {"from", "weight"}),
    "poly": ({"coeffs", "from", "to"}, {"weight"}),
    "table": ({"ts", "vs"}, {"weight"}),
}


def piece_from_config(block, where="piece"):
    if not isinstance(block, dict) or "kind" not in block:
        raise ConfigValidationError(f"{where}: expected an object with a 'kind' key")
    block = dict(block)
    kind = block.pop("kind")
    if kind not in _PIECE_KEYS:
        raise ConfigValidationError(f"{where}: unknown piece kind {kind!r}")
    required, optional = _PIECE_KEYS[kind]
    missing = required - block.keys()
    unknown = block.keys() - required - optional
    if missing or unknown:
        raise ConfigValidationError(
            [f"{where}: missing key(s) {sorted(missing)}"] * bool(missing)
            + [f"{where}: unknown key(s) {sorted(unknown)}"] * bool(unknown))
    w = block.get("weight", 1.0)
    a = block.get("from", 0.0)
    b = block.get("to")
    if kind in ("uniform", "const"):
        return UniformPiece(a, b, w)
    if kind == "exp":
        return ExponentialPiece(a, b, w, block["rate"])
    if kind == "power":
        return PowerPiece(a, b, w, block["alpha"])
    if kind == "poly":
        return PolyPiece(a, b, w, block["coeffs"])
    return TablePiece(block["ts"], block["vs"], w)


def distribution_from_config(block, where="distribution"):
    """Build a :class:`Distribution` from
    ``{"atoms": [[t, p], ...], "pieces": [...], "mass_inf": p, "renormalize": false}``."""
    if not isinstance(block, dict):
        raise ConfigValidationError(f"{where}: expected an object")
    unknown = block.keys() - {"atoms", "pieces", "mass_inf", "renormalize"}
    if unknown:
        raise ConfigValidationError(f"{where}: unknown key(s) {sorted(unknown)}")
    try:
        atoms = [(float(t), float(p)) for t, p in block.get("atoms", [])]
        pieces = [piece_from_config(b, f"{where}.pieces[{i}]")
                  for i, b in enumerate(block.get("pieces", []))]
        return Distribution(atoms, pieces, block.get("mass_inf", 0.0),
                            renormalize=bool(block.get("renormalize", False)))
    except InvalidDistribution as exc:
        raise ConfigValidationError(f"{where}: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigValidationError(f"{where}: malformed block ({exc})") from None
