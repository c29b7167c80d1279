"""Lebesgue-Stieltjes integrals against a mixed law.

All integrals run over half-open intervals (a, b]: the atom at b is counted,
the atom at a is not.  Density parts go through a vectorised adaptive
Gauss-Kronrod (7, 15) rule that works on many intervals at once, which is
what makes cumulative integrals at 10^5 sample points affordable.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonEvaluable, NotAtomic
from .functions import as_function
from .settings import EPSABS, EPSREL, PROBE_STEPS

# Gauss-Kronrod 15-point nodes on [-1, 1] (QUADPACK qk15), nonnegative half.
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
WEIGHTS_K = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_POS = np.array([1, 3, 5, 7, 9, 11, 13])  # positions of the 7 Gauss nodes in NODES
WEIGHTS_G = np.concatenate([_WG[:-1], _WG[::-1]])

_CHUNK = 400_000  # evaluation points per integrand call


@dataclass(frozen=True)
class IntegralResult:
    """Outcome of a numeric integral.

    ``converged=False`` means ``value`` is the last finite truncation and must
    not be used for equality checks.
    """

    value: float
    converged: bool
    error_estimate: float
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __float__(self):
        return float(self.value)


# core quadrature -------------------------------------------------------------


def _gk15(f, lo, hi):
    """One GK15 pass on each [lo_i, hi_i]; returns (kronrod, |kronrod - gauss|, finite)."""
    n = lo.size
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    K = np.empty(n)
    E = np.empty(n)
    ok = np.empty(n, dtype=bool)
    step = max(1, _CHUNK // NODES.size)
    for s in range(0, n, step):
        c, h = center[s:s + step], half[s:s + step]
        x = c[:, None] + h[:, None] * NODES[None, :]
        # keep nodes strictly inside: rounding can land on an endpoint singularity
        x = np.clip(x, np.nextafter(lo[s:s + step], np.inf)[:, None],
                    np.nextafter(hi[s:s + step], -np.inf)[:, None])
        fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
        finite = np.all(np.isfinite(fx), axis=1)
        fx = np.where(np.isfinite(fx), fx, 0.0)
        k = h * (fx @ WEIGHTS_K)
        g = h * (fx[:, _GAUSS_POS] @ WEIGHTS_G)
        K[s:s + step] = k
        E[s:s + step] = np.abs(k - g)
        ok[s:s + step] = finite
    return K, E, ok


def _mapped(f, a):
    """Integrand on x in [0, 1) for the substitution s = a + x / (1 - x)."""

    def g(x):
        one_minus = 1.0 - x
        return f(a + x / one_minus) / (one_minus * one_minus)

    return g


def adaptive_batch(f, lo, hi, epsabs=EPSABS, epsrel=EPSREL, max_rounds=120, max_sub=4000):
    """Integrate the vectorised ``f`` over every [lo_i, hi_i] independently.

    Each interval is refined by bisecting its worst sub-intervals until the
    summed Kronrod-Gauss discrepancy is within ``max(epsabs, epsrel*|I|)``.
    Infinite right ends are handled by mapping onto [0, 1).

    Returns ``(values, errors, converged, finite)`` arrays.
    """
    lo = np.asarray(lo, dtype=float).ravel()
    hi = np.asarray(hi, dtype=float).ravel()
    n = lo.size
    values = np.zeros(n)
    errors = np.zeros(n)
    converged = np.ones(n, dtype=bool)
    finite = np.ones(n, dtype=bool)
    inf_mask = np.isposinf(hi)
    fin_idx = np.flatnonzero(~inf_mask & (hi > lo))
    if fin_idx.size:
        v, e, c, ok = _adaptive(f, lo[fin_idx], hi[fin_idx], epsabs, epsrel, max_rounds, max_sub)
        values[fin_idx], errors[fin_idx], converged[fin_idx], finite[fin_idx] = v, e, c, ok
    for i in np.flatnonzero(inf_mask):
        v, e, c, ok = _adaptive(_mapped(f, lo[i]), np.zeros(1), np.ones(1),
                                epsabs, epsrel, max_rounds, max_sub)
        values[i], errors[i], converged[i], finite[i] = v[0], e[0], c[0], ok[0]
    return values, errors, converged, finite


def _adaptive(f, lo, hi, epsabs, epsrel, max_rounds, max_sub):
    n = lo.size
    owner = np.arange(n)
    a, b = lo.copy(), hi.copy()
    val, err, ok = _gk15(f, a, b)
    finite = np.ones(n, dtype=bool)
    np.logical_and.at(finite, owner, ok)
    for _ in range(max_rounds):
        tot_val = np.bincount(owner, val, minlength=n)
        tot_err = np.bincount(owner, err, minlength=n)
        count = np.bincount(owner, minlength=n)
        tol = np.maximum(epsabs, epsrel * np.abs(tot_val))
        pending = (tot_err > tol) & (count < max_sub)
        if not pending.any():
            break
        share = tol / (2.0 * count)
        width = b - a
        splittable = width > 8 * np.finfo(float).eps * np.maximum(np.abs(a), np.abs(b)) + 1e-300
        split = pending[owner] & (err > share[owner]) & splittable
        if not split.any():
            break
        mid = 0.5 * (a[split] + b[split])
        new_a = np.concatenate([a[split], mid])
        new_b = np.concatenate([mid, b[split]])
        new_owner = np.concatenate([owner[split], owner[split]])
        nv, ne, nok = _gk15(f, new_a, new_b)
        np.logical_and.at(finite, new_owner, nok)
        keep = ~split
        a = np.concatenate([a[keep], new_a])
        b = np.concatenate([b[keep], new_b])
        owner = np.concatenate([owner[keep], new_owner])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
    tot_val = np.bincount(owner, val, minlength=n)
    tot_err = np.bincount(owner, err, minlength=n)
    tol = np.maximum(epsabs, epsrel * np.abs(tot_val))
    return tot_val, tot_err, tot_err <= tol, finite


def quad(f, a, b, epsabs=EPSABS, epsrel=EPSREL):
    """Ordinary integral of a vectorised ``f`` over [a, b] (b may be +inf)."""
    v, e, c, ok = adaptive_batch(f, [a], [b], epsabs, epsrel)
    if not ok[0]:
        raise NonEvaluable(f"integrand is not finite on [{a}, {b}]")
    return IntegralResult(float(v[0]), bool(c[0]), float(e[0]))


# Stieltjes integrals -----------------------------------------------------------


_PDF_FLOOR = 1e-300  # below this the density is treated as not charging the point


def _density_integrand(h, d):
    def g(s):
        p = d.pdf(s)
        charged = p > _PDF_FLOOR
        out = np.zeros(np.shape(s))
        out[charged] = h(s[charged]) * p[charged]
        return out

    return g


def _atoms_in(d, lo, hi, right_closed=True):
    t = d.atom_t
    side = "right" if right_closed else "left"
    i0 = np.searchsorted(t, lo, side="right")
    i1 = np.searchsorted(t, hi, side=side)
    return slice(int(i0), int(i1))


def _atom_values(h, d, sl):
    t, p = d.atom_t[sl], d.atom_p[sl]
    if not t.size:
        return np.empty(0)
    v = h(t)
    bad = ~np.isfinite(v)
    if bad.any():
        raise NonEvaluable(f"{h.label} is not finite at atom(s) {t[bad].tolist()}")
    return v * p


def _piece_intervals(d, points):
    """Split consecutive gaps of ``points`` at density-piece boundaries.

    Returns (lo, hi, gap_index) for every nonempty gap/piece intersection.
    """
    g0, g1 = points[:-1], points[1:]
    los, his, idx = [], [], []
    for pc in d.pieces:
        lo = np.maximum(g0, pc.a)
        hi = np.minimum(g1, pc.b)
        m = hi > lo
        los.append(lo[m])
        his.append(hi[m])
        idx.append(np.flatnonzero(m))
    if not los:
        return np.empty(0), np.empty(0), np.empty(0, dtype=int)
    return np.concatenate(los), np.concatenate(his), np.concatenate(idx)


def _gap_integrals(h, d, pts, epsabs, epsrel, last_closed=True):
    """Integrals over the gaps (pts[i], pts[i+1]] of sorted ``pts``.

    With ``last_closed=False`` the atom at pts[-1] is left out.
    """
    n_gap = pts.size - 1
    gap_val = np.zeros(n_gap)
    gap_err = np.zeros(n_gap)
    gap_ok = np.ones(n_gap, dtype=bool)
    if n_gap <= 0:
        return gap_val, gap_err, gap_ok
    lo, hi, gi = _piece_intervals(d, pts)
    if lo.size:
        v, e, c, fin = adaptive_batch(_density_integrand(h, d), lo, hi, epsabs, epsrel)
        if not fin.all():
            bad = np.flatnonzero(~fin)[0]
            raise NonEvaluable(
                f"{h.label} is not finite on ({lo[bad]:g}, {hi[bad]:g}) where dG > 0")
        gap_val += np.bincount(gi, v, minlength=n_gap)
        gap_err += np.bincount(gi, e, minlength=n_gap)
        np.logical_and.at(gap_ok, gi, c)
    if d.atom_t.size:
        sl = _atoms_in(d, pts[0], pts[-1], right_closed=last_closed)
        contrib = _atom_values(h, d, sl)
        where = np.searchsorted(pts, d.atom_t[sl], side="left") - 1
        gap_val += np.bincount(where, contrib, minlength=n_gap)
    return gap_val, gap_err, gap_ok


def cumulative(h, d, ts, base=0.0, epsabs=EPSABS, epsrel=EPSREL):
    """Integrals over (base, t] for every t in ``ts``.

    Returns ``(values, errors, converged)`` with the shape of ``ts``.  Times
    not above ``base`` give 0.
    """
    h = as_function(h)
    ts = np.asarray(ts, dtype=float)
    flat = ts.ravel()
    pts = np.unique(np.concatenate([[base], flat[flat > base]]))
    gap_val, gap_err, gap_ok = _gap_integrals(h, d, pts, epsabs, epsrel)
    cum_val = np.concatenate([[0.0], np.cumsum(gap_val)])
    cum_err = np.concatenate([[0.0], np.cumsum(gap_err)])
    cum_ok = np.concatenate([[True], np.logical_and.accumulate(gap_ok)])
    k = np.searchsorted(pts, flat)
    k = np.where(flat > base, k, 0)
    shape = ts.shape
    return cum_val[k].reshape(shape), cum_err[k].reshape(shape), cum_ok[k].reshape(shape)


def tail_cumulative(h, d, ts, epsabs=EPSABS, epsrel=EPSREL):
    """Integrals over (t, t_G) for every t in ``ts`` (a Case B endpoint atom is
    not included).  Summed from the right end, so they stay accurate where the
    tail is small."""
    h = as_function(h)
    ts = np.asarray(ts, dtype=float)
    flat = ts.ravel()
    end = d.t_G
    pts = np.unique(np.concatenate([flat[flat < end], [end]]))
    gap_val, gap_err, gap_ok = _gap_integrals(h, d, pts, epsabs, epsrel, last_closed=False)
    rev_val = np.concatenate([np.cumsum(gap_val[::-1])[::-1], [0.0]])
    rev_err = np.concatenate([np.cumsum(gap_err[::-1])[::-1], [0.0]])
    rev_ok = np.concatenate([np.logical_and.accumulate(gap_ok[::-1])[::-1], [True]])
    k = np.minimum(np.searchsorted(pts, flat), pts.size - 1)
    shape = ts.shape
    return rev_val[k].reshape(shape), rev_err[k].reshape(shape), rev_ok[k].reshape(shape)


def stieltjes_integral(h, d, a, b, epsabs=EPSABS, epsrel=EPSREL):
    """Integral of ``h`` against dG over (a, b]."""
    if b < a:
        raise ValueError("stieltjes_integral needs a <= b")
    v, e, c = cumulative(h, d, np.array([b]), base=a, epsabs=epsabs, epsrel=epsrel)
    return IntegralResult(float(v[0]), bool(c[0]), float(e[0]))


def atomic_oracle(h, d, a, b):
    """Exact finite sum of h(t_i) p_i over atoms in (a, b]; no quadrature."""
    if not d.is_atomic:
        raise NotAtomic("atomic_oracle needs a purely atomic distribution")
    h = as_function(h)
    terms = []
    for t, p in zip(d.atom_t.tolist(), d.atom_p.tolist()):
        if a < t <= b:
            terms.append(float(h(np.array([t]))[0]) * p)
    return math.fsum(terms)


# improper integrals and divergence probes -------------------------------------


def _open_range(d):
    """Integration limits (0, t_G) minus the Case B endpoint atom."""
    return 0.0, d.t_G


def _continuous_total(h, d, lo, hi, epsabs, epsrel):
    """Density-part integral over (lo, hi) and the atom sum over (lo, hi)."""
    pts = np.array([lo, hi])
    a, b, _ = _piece_intervals(d, pts)
    val = err = 0.0
    ok = True
    if a.size:
        v, e, c, fin = adaptive_batch(_density_integrand(h, d), a, b, epsabs, epsrel)
        if not fin.all():
            raise NonEvaluable(f"{h.label} is not finite where dG > 0")
        val, err, ok = float(v.sum()), float(e.sum()), bool(c.all())
    atoms = _atom_values(h, d, _atoms_in(d, lo, hi, right_closed=False))
    return val + math.fsum(atoms), err, ok


def truncation_points(d, end, n=PROBE_STEPS, q0=0.5):
    """Times approaching an end of the density part geometrically in mass.

    ``left``: continuous quantiles q0 * 2^-k; ``right``: 1 - (1 - q0) * 2^-k,
    for k = 0..n.
    """
    k = np.arange(n + 1)
    if end == "left":
        levels = q0 * 0.5 ** k
    elif end == "right":
        levels = 1.0 - (1.0 - q0) * 0.5 ** k
    else:
        raise ValueError("end must be 'left' or 'right'")
    return d.continuous_quantile(levels)


def truncation_sequence(h, d, end, n=PROBE_STEPS, q0=0.5, epsabs=EPSABS, epsrel=EPSREL):
    """Partial integrals over shrinking-to-the-end truncations.

    ``left``: S_k is the integral over (t_k, t_0]; ``right``: over (t_0, t_k].
    Returns ``(S, shell_converged)`` with S[0] = 0.
    """
    h = as_function(h)
    t = truncation_points(d, end, n, q0)
    if end == "left":
        lo, hi = t[1:], t[:-1]
    else:
        lo, hi = t[:-1], t[1:]
    a, b, gi = [], [], []
    for i, (x, y) in enumerate(zip(lo, hi)):
        pa, pb, _ = _piece_intervals(d, np.array([x, y]))
        a.extend(pa)
        b.extend(pb)
        gi.extend([i] * pa.size)
    shells = np.zeros(n)
    ok = np.ones(n, dtype=bool)
    if a:
        v, _, c, fin = adaptive_batch(_density_integrand(h, d), np.array(a), np.array(b),
                                      epsabs, epsrel)
        if not fin.all():
            raise NonEvaluable(f"{h.label} is not finite where dG > 0")
        gi = np.array(gi)
        shells += np.bincount(gi, v, minlength=n)
        np.logical_and.at(ok, gi, c)
    for i, (x, y) in enumerate(zip(lo, hi)):
        shells[i] += math.fsum(_atom_values(h, d, _atoms_in(d, x, y)))
    return np.concatenate([[0.0], np.cumsum(shells)]), ok


def probe_end(h, d, end, n=PROBE_STEPS, epsabs=EPSABS, epsrel=EPSREL, slack=1e-3):
    """Convergence verdict for the improper integral of ``h`` at one end of the
    density part.

    Divergent when the last shell increments fail the Cauchy test and do not
    decrease (up to a relative ``slack``).  A declared verdict on ``h`` wins.
    """
    h = as_function(h)
    if end in h.declared:
        return {"end": end, "convergent": h.declared[end] == "convergent",
                "source": "declared", "tail": 0.0, "partial": None}
    S, ok = truncation_sequence(h, d, end, n, epsabs=epsabs, epsrel=epsrel)
    inc = np.abs(np.diff(S))
    last = inc[-5:]
    total = abs(S[-1])
    tol = max(epsabs, epsrel * total)
    info = {"end": end, "source": "probe", "partial": float(S[-1])}
    if not ok.all():
        return {**info, "convergent": False, "tail": math.inf, "reason": "shell quadrature failed"}
    if last.sum() <= tol:
        return {**info, "convergent": True, "tail": float(last.sum()), "reason": "cauchy"}
    prev = inc[-6:-1]
    nondecreasing = np.all(last >= prev * (1.0 - slack))
    if nondecreasing:
        return {**info, "convergent": False, "tail": math.inf,
                "reason": "increments do not decrease"}
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(prev > 0, last / prev, 0.0)
    r = float(np.clip(ratios.max(), 0.0, 1.0 - slack))
    tail = float(last[-1] * r / (1.0 - r))
    return {**info, "convergent": True, "tail": tail, "reason": "geometric decay"}


def improper_integral(h, d, ends=("left", "right"), epsabs=EPSABS, epsrel=EPSREL):
    """Integral of ``h`` over (0, t_G), excluding a Case B endpoint atom.

    The value comes from adaptive quadrature over the whole range; each end of
    the density part listed in ``ends`` is probed for divergence.  On
    divergence ``converged`` is False and ``value`` is the last finite
    truncation.
    """
    h = as_function(h)
    lo, hi = _open_range(d)
    val, err, ok = _continuous_total(h, d, lo, hi, epsabs, epsrel)
    probes = []
    if d.pieces:
        probes = [probe_end(h, d, end, epsabs=epsabs, epsrel=epsrel) for end in ends]
    diverged = [p for p in probes if not p["convergent"]]
    diag = {"probes": probes, "quadrature_converged": ok}
    if diverged:
        partial = val if ok else sum(p["partial"] or 0.0 for p in probes)
        return IntegralResult(float(partial), False, math.inf, diag)
    declared_ok = any(p["source"] == "declared" for p in probes)
    if not ok and not declared_ok:
        tail = max((p["tail"] for p in probes), default=0.0)
        if tail > max(epsabs, epsrel * abs(val)) * 100:
            return IntegralResult(float(val), False, math.inf, diag)
        err = max(err, tail)
    return IntegralResult(float(val), True, float(err), diag)


def local_integrability(h, d, epsabs=EPSABS, epsrel=EPSREL):
    """Whether the integral of |h| dG is finite on every compact part of the
    support (the open support (0, t_G) in Case A, (0, t_G] in Case B).

    Returns ``(ok, diagnostics)``.  A non-finite value of ``h`` on a set that
    dG charges counts as a failure.
    """
    h = as_function(h).abs()
    diag = {}
    try:
        if d.endpoint_case().is_B:
            r = improper_integral(h, d, epsabs=epsabs, epsrel=epsrel)
            end_value = float(h(np.array([d.t_G]))[0])
            diag.update(integral=r.value, probes=r.diagnostics.get("probes", []),
                        endpoint_value=end_value)
            return bool(r.converged and math.isfinite(end_value)), diag
        _atom_values(h, d, _atoms_in(d, 0.0, d.t_G, right_closed=False))
        if not d.pieces:
            return True, diag
        left = probe_end(h, d, "left", epsabs=epsabs, epsrel=epsrel)
        hi = float(d.continuous_quantile(np.array([1.0 - 2.0 ** -20]))[0])
        val, _, ok = _continuous_total(h, d, 0.0, hi, epsabs, epsrel)
        diag.update(left=left, upto=hi, integral=val, quadrature_converged=ok)
        if not left["convergent"]:
            return False, diag
        return bool(ok or left["source"] == "declared"), diag
    except NonEvaluable as exc:
        diag["reason"] = str(exc)
        return False, diag
