"""Named example configurations.

Each preset is a config block in the same JSON shape the command line
accepts, so presets and user files share one parser.
"""

import copy

UNIFORM = {"pieces": [{"kind": "uniform", "from": 0.0, "to": 1.0}]}
EXPONENTIAL = {"pieces": [{"kind": "exp", "rate": 1.0}]}
TWO_ATOMS = {"atoms": [[1.0, 0.5], [2.0, 0.5]]}

PRESETS = {
    # hazard identity: K = 1 under an exponential law gives F(t) = t
    "dellacherie": {
        "mode": "compensate",
        "distribution": EXPONENTIAL,
        "K": {"kind": "const", "c": 1.0},
        "grid": [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0],
    },
    # Y / gamma with a fair sign Y: finite everywhere but not locally integrable
    "emery": {
        "mode": "sigma",
        "distribution": EXPONENTIAL,
        "H": {"kind": "const", "c": 0.0},
        "F0": 0.0,
        "noise": {"kind": "two_point", "J": {"kind": "power", "alpha": -1.0}},
    },
    # the two local martingales whose product is the "emery" preset
    "emery-factors": {
        "mode": "sigma",
        "distribution": EXPONENTIAL,
        "H": {"kind": "power", "alpha": -0.5},
        "F0": 0.0,
        "noise": {"kind": "two_point", "J": {"kind": "power", "alpha": -0.5}},
    },
    # H = 0, F = 1/(1 - t): a local martingale that is not a martingale
    "usualcond": {
        "mode": "classify",
        "distribution": UNIFORM,
        "H": {"kind": "const", "c": 0.0},
        "F0": 1.0,
        "grid": [0.25, 0.5, 0.9],
    },
    # monotone H with mean zero; F is its Hardy-Littlewood maximal function
    "dubins-gilat": {
        "mode": "classify",
        "distribution": UNIFORM,
        "H": {"kind": "affine", "a": 2.0, "b": -1.0},
        "F0": 0.0,
        "grid": [0.25, 0.5, 0.9],
    },
    "caseB-two-atoms": {
        "mode": "classify",
        "distribution": TWO_ATOMS,
        "H": {"kind": "points", "ts": [1.0, 2.0], "vs": [1.0, -1.0]},
        "K": {"kind": "const", "c": 1.0},
        "grid": [0.5, 1.0, 1.5, 2.0, 3.0],
    },
    # H(t) = e^t/(1+t)^2 - 1 under Exp(1): |H| integrable, sup not integrable.
    # Both facts hinge on integrals that converge like 1/log, far too slowly to
    # resolve in double precision, so they are declared.
    "type3": {
        "mode": "classify",
        "distribution": EXPONENTIAL,
        "H": {"kind": "sum", "terms": [
            {"kind": "product", "terms": [{"kind": "exp", "rate": 1.0},
                                          {"kind": "power", "alpha": -2.0, "shift": 1.0}]},
            {"kind": "const", "c": -1.0}]},
        "F0": 0.0,
        "declared": {"lim": 0.0, "H1": "divergent"},
    },
}


def preset(name):
    """A deep copy of the named preset block."""
    try:
        return copy.deepcopy(PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r} (known: {', '.join(sorted(PRESETS))})") from None
