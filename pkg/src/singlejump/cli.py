"""Command line front end.

Every run is described by one JSON file (``--config``) or a named preset
(``--preset`` / ``example NAME``).  Results go to standard output as a short
summary followed by CSV; with ``--out DIR`` the CSV is written to
``DIR/<mode>.csv`` and the summary to ``DIR/<mode>.txt``.

Exit codes: 0 success, 2 malformed config, 3 invalid config, 4 an answer
needed an integral that diverges, 5 other precondition failures.
"""

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .compensator import (JumpMarkSpec, check_locally_integrable, compensate, survival_from_K)
from .config import MODES, parse_config, with_overrides
from .errors import ConfigParseError, SingleJumpError
from .presets import PRESETS
from .settings import Settings
from .simulate import simulate
from .solver import (ConditionMPair, DerivativePair, Representation, classify, sigma_status,
                     solve_F_from_H, solve_H_from_F, verify_condition_m)

_FMT = "{:.12g}"


def _num(x):
    return _FMT.format(float(x))


def build_pair(cfg):
    """Condition-M pair described by the config's F0/z/H blocks."""
    d, s = cfg.distribution, cfg.settings
    if cfg.z is not None:
        F = DerivativePair(cfg.F0 or 0.0, cfg.z, d, epsabs=s.epsabs, epsrel=s.epsrel)
        return ConditionMPair(F, cfg.H) if cfg.H is not None else solve_H_from_F(F)
    if cfg.H is not None:
        return solve_F_from_H(cfg.H, d, cfg.F0, epsabs=s.epsabs, epsrel=s.epsrel)
    return ConditionMPair.zero(d)


def _grid(cfg):
    d, s = cfg.distribution, cfg.settings
    if isinstance(cfg.grid, list):
        return np.array(cfg.grid)
    n = cfg.grid if isinstance(cfg.grid, int) else s.grid_size
    return d.validation_grid(n, s.eps_floor)


def _run_solve(cfg, out):
    s = cfg.settings
    pair = build_pair(cfg)
    grid = _grid(cfg)
    rep = verify_condition_m(pair, tol=s.verify_tol, eps_floor=s.eps_floor,
                             epsabs=s.epsabs, epsrel=s.epsrel)
    out.line(f"case: {pair.case}")
    out.line(f"F0: {_num(pair.F0)}")
    out.line(f"max residual: {rep.max_residual:.3e} ({'pass' if rep.passed else 'FAIL'} "
             f"at tol {s.verify_tol:g})")
    if pair.case.is_B:
        out.line(f"lim F at t_G: {_num(pair.F.limit())}")
        out.line(f"endpoint mismatch: {rep.endpoint_mismatch:.3e}")
    F, H = pair.F(grid), pair.H(grid)
    out.table(("t", "F", "H"), zip(grid, F, H))


def _run_classify(cfg, out):
    s = cfg.settings
    pair = build_pair(cfg)
    res = classify(pair, cfg.noise, sign_tol=s.sign_tol, declared=cfg.declared,
                   epsabs=s.epsabs, epsrel=s.epsrel)
    dg = res.diagnostics
    out.line(f"type: {res.tag}")
    out.line(f"case: {dg['case']}")
    for key, label in (("J_integral", "E|L'|"), ("H_abs_integral", "int |H| dG"),
                       ("H1_integral", "int Gbar |dF/dG| dG")):
        if key in dg:
            v = dg[key]
            value = "-" if v["value"] is None else _num(v["value"])
            verdict = "convergent" if v["converged"] else "divergent"
            out.line(f"{label}: {verdict} ({v['source']}, value {value})")
    if "lim_FGbar" in dg:
        out.line(f"lim F*Gbar: {_num(dg['lim_FGbar'])} ({dg.get('lim_source', 'numeric')})")
    for step in dg["path"]:
        out.line(f"decision: {step}")


def _run_sigma(cfg, out):
    s = cfg.settings
    pair = build_pair(cfg)
    status = sigma_status(pair, cfg.noise, epsabs=s.epsabs, epsrel=s.epsrel)
    out.line(f"status: {status}")
    out.line(f"noise: {cfg.noise.kind} with J = {cfg.noise.J.label}")


def _mark(cfg):
    return JumpMarkSpec(cfg.K, cfg.Kabs)


def _run_compensate(cfg, out):
    s = cfg.settings
    mark = _mark(cfg)
    d = cfg.distribution
    ok = check_locally_integrable(mark, d, s.epsabs, s.epsrel)
    out.line(f"locally integrable variation: {'yes' if ok else 'no'}")
    res = compensate(mark, d, s.epsabs, s.epsrel)
    out.line(f"case: {d.endpoint_case()}")
    out.line(f"final atom jump: {_num(res.caseB_jump)}")
    grid = _grid(cfg)
    F = res.F.F(grid)
    inc = np.diff(np.concatenate([[0.0], F]))
    out.table(("t", "F", "A_increment"), zip(grid, F, inc))


def _run_survival(cfg, out):
    s = cfg.settings
    t = np.array(cfg.times)
    sv = survival_from_K(cfg.K, t, s.epsabs, s.epsrel)
    out.line(f"K: {cfg.K.label}")
    out.table(("t", "survival"), zip(t, sv))


def _run_simulate(cfg, out):
    s = cfg.settings
    pair = build_pair(cfg)
    grid = _grid(cfg)
    rep = simulate(Representation(pair, cfg.noise), grid, s.n_paths, s.seed)
    out.line(f"paths: {rep.n_paths}  seed: {rep.seed}")
    out.line(f"E M_0: {_num(rep.expected_M0)}")
    out.line(f"E M_inf: {_num(rep.mean_terminal)} +- {_num(rep.se_terminal)}")
    out.line(f"E sup M: {_num(rep.mean_sup)} +- {_num(rep.se_sup)}")
    out.line(f"E sup|M|: {_num(rep.mean_sup_abs)} +- {_num(rep.se_sup_abs)}")
    out.line(f"E Var(M)_inf: {_num(rep.mean_variation)} +- {_num(rep.se_variation)}")
    out.table(("t", "mean", "se", "n"), rep.rows())


_RUNNERS = {
    "solve-f": _run_solve,
    "solve-h": _run_solve,
    "classify": _run_classify,
    "sigma": _run_sigma,
    "compensate": _run_compensate,
    "survival": _run_survival,
    "simulate": _run_simulate,
}


class _Output:
    def __init__(self, header):
        self.summary = [header]
        self.csv = None

    def line(self, text):
        self.summary.append(text)

    def table(self, columns, rows):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([v if isinstance(v, int) else _num(v) for v in row])
        self.csv = buf.getvalue()


def header(cfg):
    name = f" preset={cfg.name}" if cfg.name else ""
    return f"# singlejump {__version__} mode={cfg.mode}{name} {cfg.settings.header()}"


def run(cfg, out_dir=None, stream=None):
    """Execute a validated :class:`RunConfig`; returns 0."""
    stream = stream or sys.stdout
    out = _Output(header(cfg))
    _RUNNERS[cfg.mode](cfg, out)
    text = "\n".join(out.summary) + "\n"
    if out_dir is not None:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        (path / f"{cfg.mode}.txt").write_text(text)
        if out.csv is not None:
            (path / f"{cfg.mode}.csv").write_text(out.summary[0] + "\n" + out.csv)
        stream.write(text)
    else:
        stream.write(text)
        if out.csv is not None:
            stream.write(out.csv)
    return 0


def _parser():
    d = Settings()
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--config", metavar="PATH", help="JSON run description")
    src.add_argument("--preset", metavar="NAME", choices=sorted(PRESETS),
                     help="start from a named preset")
    common.add_argument("--out", metavar="DIR", help="write CSV and summary files here")
    for flag, dest, typ, text in _FLAGS:
        common.add_argument(flag, dest=dest, type=typ, default=None, metavar="N" if typ is int
                            else "X", help=f"{text} (default: {getattr(d, dest)})")
    epilog = "numeric options (every mode):\n" + "\n".join(
        f"  {flag:<12} {text} (default: {getattr(d, dest)})" for flag, dest, _, text in _FLAGS)
    epilog += "\n\nexit codes: 0 ok, 2 malformed config, 3 invalid config, " \
              "4 divergent integral, 5 failed precondition"
    p = argparse.ArgumentParser(prog="singlejump",
                                description="Local martingales in a single-jump filtration.",
                                epilog=epilog, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"singlejump {__version__}")
    sub = p.add_subparsers(dest="mode", metavar="MODE", required=True)
    helps = {
        "solve-f": "pre-jump path F from the post-jump level H",
        "solve-h": "post-jump level H from F0 and dF/dG",
        "classify": "global type (1, 2a, 2b, 3, 4) of the local martingale",
        "sigma": "local martingale, strict sigma-martingale or neither",
        "compensate": "compensator of V 1{t >= gamma} from K = E[V | gamma]",
        "survival": "survival function recovered from K",
        "simulate": "Monte Carlo means on a grid",
        "example": f"run a preset: {', '.join(sorted(PRESETS))}",
    }
    for mode in MODES:
        sp = sub.add_parser(mode, parents=[common], help=helps[mode], description=helps[mode])
        if mode == "example":
            sp.add_argument("name", choices=sorted(PRESETS))
    return p


_FLAGS = (
    ("--seed", "seed", int, "simulation seed"),
    ("--n-paths", "n_paths", int, "simulated paths"),
    ("--grid", "grid_size", int, "validation grid size"),
    ("--tol", "verify_tol", float, "residual tolerance for the balance check"),
    ("--sign-tol", "sign_tol", float, "tolerance for the sign of lim F*Gbar"),
    ("--epsabs", "epsabs", float, "absolute quadrature tolerance"),
    ("--epsrel", "epsrel", float, "relative quadrature tolerance"),
    ("--eps-floor", "eps_floor", float, "smallest Gbar(t) kept on validation grids"),
)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        if args.mode == "example":
            if args.config or args.preset:
                parser.error("example takes a preset name, not --config or --preset")
            cfg = parse_config({"mode": "example", "name": args.name})
        elif args.config:
            try:
                text = Path(args.config).read_text()
            except OSError as exc:
                raise ConfigParseError(f"cannot read {args.config}: {exc.strerror}") from None
            cfg = parse_config(text, mode=args.mode)
        elif args.preset:
            cfg = parse_config({"preset": args.preset}, mode=args.mode)
        else:
            parser.error("give --config PATH or --preset NAME")
        cfg = with_overrides(cfg, **{dest: getattr(args, dest) for _, dest, _, _ in _FLAGS})
        return run(cfg, args.out)
    except SingleJumpError as exc:
        sys.stderr.write(f"error ({type(exc).__name__}): {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
