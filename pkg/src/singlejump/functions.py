"""Deterministic real functions of time.

A :class:`RealFunction` wraps a vectorised numpy callable together with a
short label and, optionally, a declared integrability verdict near an endpoint
of the integration range.  Closed forms come from a small catalog; pointwise
sums, products and scalings of catalog members are again ``RealFunction``\\ s.
"""

import numbers

import numpy as np

from .errors import ConfigValidationError

_VERDICTS = ("convergent", "divergent")
_ENDS = ("left", "right")


class RealFunction:
    """Vectorised function t -> value.

    Parameters
    ----------
    fn : callable
        Maps a float ndarray to an ndarray of the same shape.
    label : str
        Human readable description, used in reports.
    declared : dict, optional
        ``{"left"|"right": "convergent"|"divergent"}``.  A declared verdict
        replaces numeric probing of the improper integral of this function at
        that end of the range.
    config : dict, optional
        JSON block that rebuilds the function through :func:`from_config`.
    """

    def __init__(self, fn, label="f", declared=None, config=None):
        self._fn = fn
        self.label = label
        self.declared = dict(declared or {})
        for end, verdict in self.declared.items():
            if end not in _ENDS or verdict not in _VERDICTS:
                raise ValueError(f"bad declared verdict {end!r}: {verdict!r}")
        self.config = config

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.asarray(self._fn(t), dtype=float)
        if out.shape != t.shape:
            out = np.broadcast_to(out, t.shape).copy()
        return out

    def __repr__(self):
        return f"RealFunction({self.label})"

    def with_declared(self, **verdicts):
        merged = {**self.declared, **verdicts}
        return RealFunction(self._fn, self.label, merged, self.config)

    # pointwise algebra -------------------------------------------------

    def __add__(self, other):
        other = as_function(other)
        return RealFunction(lambda t: self(t) + other(t), f"({self.label} + {other.label})")

    __radd__ = __add__

    def __sub__(self, other):
        other = as_function(other)
        return RealFunction(lambda t: self(t) - other(t), f"({self.label} - {other.label})")

    def __rsub__(self, other):
        return as_function(other) - self

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            c = float(other)
            declared = self.declared if c != 0 else {}
            cfg = None
            if self.config is not None:
                cfg = {"kind": "scaled", "c": c, "f": self.config}
            return RealFunction(lambda t: c * self(t), f"{c:g}*{self.label}", declared, cfg)
        other = as_function(other)
        return RealFunction(lambda t: self(t) * other(t), f"{self.label}*{other.label}")

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __truediv__(self, other):
        if isinstance(other, numbers.Real):
            return self * (1.0 / float(other))
        other = as_function(other)
        return RealFunction(lambda t: self(t) / other(t), f"{self.label}/{other.label}")

    def abs(self):
        return RealFunction(lambda t: np.abs(self(t)), f"|{self.label}|", self.declared)


def as_function(value):
    if isinstance(value, RealFunction):
        return value
    if isinstance(value, numbers.Real):
        return const(float(value))
    if callable(value):
        return from_callable(value)
    raise TypeError(f"cannot interpret {value!r} as a function of time")


def from_callable(f, label="callable", declared=None):
    return RealFunction(f, label, declared)


# catalog ------------------------------------------------------------------


def const(c):
    c = float(c)
    return RealFunction(lambda t: np.full_like(t, c), f"{c:g}",
                        config={"kind": "const", "c": c})


def affine(a, b):
    """a*s + b."""
    a, b = float(a), float(b)
    return RealFunction(lambda t: a * t + b, f"{a:g}*s{b:+g}",
                        config={"kind": "affine", "a": a, "b": b})


def poly(coeffs):
    """Polynomial with coefficients in increasing degree."""
    coeffs = [float(c) for c in coeffs]
    return RealFunction(lambda t: np.polynomial.polynomial.polyval(t, coeffs),
                        f"poly{coeffs}", config={"kind": "poly", "coeffs": coeffs})


def power(alpha, c=1.0, shift=0.0):
    """c * (s + shift)**alpha."""
    alpha, c, shift = float(alpha), float(c), float(shift)
    base = "s" if shift == 0 else f"(s{shift:+g})"
    cfg = {"kind": "power", "alpha": alpha, "c": c}
    if shift:
        cfg["shift"] = shift
    return RealFunction(lambda t: c * np.power(t + shift, alpha), f"{c:g}*{base}^{alpha:g}",
                        config=cfg)


def one_minus_power(beta, c=1.0, end=1.0):
    """c * (end - s)**beta; ``beta=-1`` is the reciprocal (1-s)^-1."""
    beta, c, end = float(beta), float(c), float(end)
    return RealFunction(lambda t: c * np.power(end - t, beta),
                        f"{c:g}*({end:g}-s)^{beta:g}",
                        config={"kind": "one_minus_power", "beta": beta, "c": c, "end": end})


def exponential(rate, c=1.0):
    """c * exp(rate * s)."""
    rate, c = float(rate), float(c)
    return RealFunction(lambda t: c * np.exp(rate * t), f"{c:g}*exp({rate:g}s)",
                        config={"kind": "exp", "rate": rate, "c": c})


def log_singular(p, c=1.0, end=1.0):
    """c / ((end - s) * (1 - log(end - s))**p) for end - s in (0, 1].

    With ``p = 2`` the function is integrable at ``end`` while
    ``(end - s) * log``-weighted versions of it are not; this is the standard
    source of uniformly integrable martingales with non-integrable maximum.
    """
    p, c, end = float(p), float(c), float(end)

    def fn(t):
        x = end - t
        return c / (x * (1.0 - np.log(x)) ** p)

    return RealFunction(fn, f"{c:g}/((1-s)(1-log(1-s))^{p:g})",
                        config={"kind": "log_singular", "p": p, "c": c, "end": end})


def table(ts, vs):
    """Linear interpolation through (ts, vs); NaN outside [ts[0], ts[-1]]."""
    ts = np.asarray(ts, dtype=float)
    vs = np.asarray(vs, dtype=float)
    if ts.ndim != 1 or ts.shape != vs.shape or ts.size < 2:
        raise ValueError("table needs matching 1-D ts and vs with at least two points")
    if not np.all(np.diff(ts) > 0):
        raise ValueError("table ts must be strictly increasing")

    def fn(t):
        out = np.interp(t, ts, vs)
        return np.where((t < ts[0]) | (t > ts[-1]), np.nan, out)

    return RealFunction(fn, f"table[{ts[0]:g}..{ts[-1]:g}]",
                        config={"kind": "table", "ts": ts.tolist(), "vs": vs.tolist()})


def points(ts, vs, default=float("nan")):
    """Exact lookup at the listed points, ``default`` elsewhere.

    Meant for purely atomic laws where a function only matters at the atoms.
    """
    ts = np.asarray(ts, dtype=float)
    vs = np.asarray(vs, dtype=float)
    if ts.shape != vs.shape:
        raise ValueError("points needs matching ts and vs")
    order = np.argsort(ts)
    ts, vs = ts[order], vs[order]
    default = float(default)

    def fn(t):
        out = np.full_like(t, default)
        if ts.size:
            idx = np.clip(np.searchsorted(ts, t), 0, ts.size - 1)
            match = ts[idx] == t
            out[match] = vs[idx[match]]
        return out

    return RealFunction(fn, f"points{dict(zip(ts.tolist(), vs.tolist()))}",
                        config={"kind": "points", "ts": ts.tolist(), "vs": vs.tolist(),
                                "default": default})


# config -------------------------------------------------------------------

_KINDS = {
    "const": (const, {"c"}, set()),
    "affine": (affine, {"a", "b"}, set()),
    "poly": (poly, {"coeffs"}, set()),
    "power": (power, {"alpha"}, {"c", "shift"}),
    "one_minus_power": (one_minus_power, {"beta"}, {"c", "end"}),
    "power_recip": (lambda c=1.0, end=1.0: one_minus_power(-1.0, c, end), set(), {"c", "end"}),
    "power_recip2": (lambda c=1.0, end=1.0: one_minus_power(-2.0, c, end), set(), {"c", "end"}),
    "exp": (exponential, {"rate"}, {"c"}),
    "log_singular": (log_singular, {"p"}, {"c", "end"}),
    "table": (table, {"ts", "vs"}, set()),
    "points": (points, {"ts", "vs"}, {"default"}),
}

FUNCTION_KINDS = tuple(sorted(_KINDS)) + ("scaled", "sum", "product")


def from_config(block, where="function"):
    """Build a :class:`RealFunction` from a JSON block such as
    ``{"kind": "power", "alpha": -0.5}``.

    Unknown kinds or keys raise :class:`ConfigValidationError`.  The optional
    ``declared`` key carries an integrability verdict.
    """
    if isinstance(block, numbers.Real) and not isinstance(block, bool):
        return const(block)
    if not isinstance(block, dict) or "kind" not in block:
        raise ConfigValidationError(f"{where}: expected an object with a 'kind' key")
    block = dict(block)
    kind = block.pop("kind")
    declared = block.pop("declared", None)
    if kind == "scaled":
        _check_keys(block, {"c", "f"}, set(), where)
        f = from_config(block["f"], where + ".f") * float(block["c"])
    elif kind in ("sum", "product"):
        _check_keys(block, {"terms"}, set(), where)
        terms = [from_config(b, f"{where}.terms[{i}]") for i, b in enumerate(block["terms"])]
        if not terms:
            raise ConfigValidationError(f"{where}: empty terms")
        f = terms[0]
        for g in terms[1:]:
            f = f + g if kind == "sum" else f * g
        f.config = {"kind": kind, "terms": [t.config for t in terms]}
    elif kind in _KINDS:
        ctor, required, optional = _KINDS[kind]
        _check_keys(block, required, optional, where)
        try:
            f = ctor(**block)
        except (TypeError, ValueError) as exc:
            raise ConfigValidationError(f"{where}: {exc}") from None
        f.config = {"kind": kind, **block}
    else:
        raise ConfigValidationError(
            f"{where}: unknown function kind {kind!r} (known: {', '.join(FUNCTION_KINDS)})")
    if declared is not None:
        if not isinstance(declared, dict):
            raise ConfigValidationError(f"{where}.declared: expected an object")
        try:
            f = f.with_declared(**declared)
        except ValueError as exc:
            raise ConfigValidationError(f"{where}.declared: {exc}") from None
        f.config = {**(f.config or {}), "declared": declared}
    return f


def _check_keys(block, required, optional, where):
    missing = required - block.keys()
    unknown = block.keys() - required - optional
    errors = []
    if missing:
        errors.append(f"{where}: missing key(s) {sorted(missing)}")
    if unknown:
        errors.append(f"{where}: unknown key(s) {sorted(unknown)}")
    if errors:
        raise ConfigValidationError(errors)
