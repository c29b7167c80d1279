"""Run configuration: strict JSON parsing and validation."""

import json
import numbers
from dataclasses import dataclass, field, fields, replace

from .errors import ConfigParseError, ConfigValidationError
from .functions import from_config
from .measure import distribution_from_config
from .presets import PRESETS, preset
from .settings import Settings
from .solver import NoiseSpec, noise_from_config

MODES = ("solve-f", "solve-h", "classify", "sigma", "compensate", "survival", "simulate",
         "example")

_TOP_KEYS = {"mode", "name", "preset", "distribution", "F0", "z", "H", "noise", "K", "Kabs",
             "t", "grid", "options", "declared"}

# blocks every mode needs; "pair" means H or z
_REQUIRED = {
    "solve-f": ("distribution", "H"),
    "solve-h": ("distribution", "z", "F0"),
    "classify": ("distribution", "pair"),
    "sigma": ("distribution", "noise"),
    "compensate": ("distribution", "K"),
    "survival": ("K", "t"),
    "simulate": ("distribution", "pair"),
    "example": ("name",),
}

_DECLARED_KEYS = {"J", "H", "H1", "lim"}


@dataclass
class RunConfig:
    """A validated run: mode, parsed blocks and numeric settings."""

    mode: str
    settings: Settings = field(default_factory=Settings)
    name: str = None
    distribution: object = None
    F0: float = None
    H: object = None
    z: object = None
    noise: NoiseSpec = field(default_factory=NoiseSpec.zero)
    K: object = None
    Kabs: object = None
    times: list = None
    grid: object = None
    declared: dict = None
    raw: dict = field(default_factory=dict)


def _load(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise ConfigParseError("top level must be a JSON object", 1, 1)
    return data


def _expand(data, mode):
    """Resolve ``example`` and ``preset`` references into a full block."""
    mode = mode or data.get("mode")
    if mode is None:
        raise ConfigValidationError("missing 'mode'")
    if mode not in MODES:
        raise ConfigValidationError(f"unknown mode {mode!r} (known: {', '.join(MODES)})")
    if mode == "example":
        name = data.get("name")
        if name is None:
            raise ConfigValidationError("mode 'example' needs 'name'")
        extra = set(data) - {"mode", "name", "options"}
        if extra:
            raise ConfigValidationError(f"unknown key(s) for mode 'example': {sorted(extra)}")
    else:
        name = data.get("preset")
    if name is None:
        return {**data, "mode": mode}, None
    if name not in PRESETS:
        raise ConfigValidationError(
            f"unknown preset {name!r} (known: {', '.join(sorted(PRESETS))})")
    base = preset(name)
    overrides = {k: v for k, v in data.items() if k not in ("mode", "name", "preset")}
    data = {**base, **overrides}
    if mode != "example":
        data["mode"] = mode
    return data, name


def _settings(block, errors):
    if block is None:
        return Settings()
    if not isinstance(block, dict):
        errors.append("options: expected an object")
        return Settings()
    known = {f.name: f.type for f in fields(Settings)}
    unknown = set(block) - set(known)
    if unknown:
        errors.append(f"options: unknown key(s) {sorted(unknown)}")
    kw = {}
    for k, v in block.items():
        if k not in known:
            continue
        if not isinstance(v, numbers.Real) or isinstance(v, bool):
            errors.append(f"options.{k}: expected a number")
            continue
        kw[k] = int(v) if known[k] in (int, "int") else float(v)
    return Settings(**kw)


def parse_config(text, mode=None):
    """Parse and validate a JSON run description.

    ``mode`` (from the command line) overrides the file's ``mode``.

    Raises
    ------
    ConfigParseError
        Malformed JSON, with line and column.
    ConfigValidationError
        Well-formed but inconsistent; ``errors`` lists every problem found.
    """
    data = _load(text) if isinstance(text, str) else dict(text)
    return validate_config(data, mode)


def validate_config(data, mode=None):
    data, name = _expand(data, mode)
    mode = data["mode"]
    errors = []
    unknown = set(data) - _TOP_KEYS
    if unknown:
        errors.append(f"unknown key(s) {sorted(unknown)}")
    for need in _REQUIRED[mode]:
        if need == "pair":
            if "H" not in data and "z" not in data:
                errors.append(f"mode {mode!r} needs block 'H' or 'z'")
        elif need not in data:
            errors.append(f"mode {mode!r} needs block {need!r}")
    cfg = RunConfig(mode=mode, name=name, raw=data)
    cfg.settings = _settings(data.get("options"), errors)

    def build(key, fn):
        if key not in data:
            return None
        try:
            return fn(data[key], key)
        except ConfigValidationError as exc:
            errors.extend(exc.errors)
        except (TypeError, ValueError) as exc:
            errors.append(f"{key}: {exc}")
        return None

    cfg.distribution = build("distribution", distribution_from_config)
    cfg.H = build("H", from_config)
    cfg.z = build("z", from_config)
    cfg.K = build("K", from_config)
    cfg.Kabs = build("Kabs", from_config)
    cfg.noise = build("noise", noise_from_config) or NoiseSpec.zero()
    if "F0" in data:
        if isinstance(data["F0"], numbers.Real) and not isinstance(data["F0"], bool):
            cfg.F0 = float(data["F0"])
        else:
            errors.append("F0: expected a number")
    cfg.times = build("t", _times)
    cfg.grid = build("grid", _grid)
    cfg.declared = build("declared", _declared)
    if (mode in ("solve-f", "classify", "simulate") and "z" not in data and cfg.F0 is None
            and cfg.distribution is not None and not cfg.distribution.endpoint_case().is_B):
        errors.append(f"mode {mode!r}: 'F0' is required when the support has no final atom")
    if errors:
        raise ConfigValidationError(errors)
    return cfg


def _times(block, where):
    if isinstance(block, numbers.Real) and not isinstance(block, bool):
        block = [block]
    if not isinstance(block, list) or not all(
            isinstance(v, numbers.Real) and not isinstance(v, bool) for v in block):
        raise ConfigValidationError(f"{where}: expected a number or a list of numbers")
    if not block:
        raise ConfigValidationError(f"{where}: empty list")
    return [float(v) for v in block]


def _grid(block, where):
    if isinstance(block, int) and not isinstance(block, bool):
        if block < 1:
            raise ConfigValidationError(f"{where}: size must be positive")
        return block
    return _times(block, where)


def _declared(block, where):
    if not isinstance(block, dict):
        raise ConfigValidationError(f"{where}: expected an object")
    unknown = set(block) - _DECLARED_KEYS
    if unknown:
        raise ConfigValidationError(f"{where}: unknown key(s) {sorted(unknown)}")
    for k, v in block.items():
        if k == "lim":
            if not isinstance(v, numbers.Real) or isinstance(v, bool):
                raise ConfigValidationError(f"{where}.lim: expected a number")
        elif v not in ("convergent", "divergent"):
            raise ConfigValidationError(f"{where}.{k}: expected 'convergent' or 'divergent'")
    return dict(block)


def with_overrides(cfg, **kw):
    """Copy of ``cfg`` with some settings replaced (None values are ignored)."""
    kw = {k: v for k, v in kw.items() if v is not None}
    return replace(cfg, settings=replace(cfg.settings, **kw)) if kw else cfg
