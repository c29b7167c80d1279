"""Numeric defaults shared by the library and the command line."""

from dataclasses import asdict, dataclass

EPSABS = 1e-10
EPSREL = 1e-8
GRID_SIZE = 64
EPS_FLOOR = 1e-12
SIGN_TOL = 1e-7
VERIFY_TOL = 1e-8
N_PATHS = 100_000
SEED = 20200525
MASS_TOL = 1e-10
PROBE_STEPS = 40


@dataclass(frozen=True)
class Settings:
    epsabs: float = EPSABS
    epsrel: float = EPSREL
    grid_size: int = GRID_SIZE
    eps_floor: float = EPS_FLOOR
    sign_tol: float = SIGN_TOL
    verify_tol: float = VERIFY_TOL
    n_paths: int = N_PATHS
    seed: int = SEED

    def as_dict(self):
        return asdict(self)

    def header(self):
        return " ".join(f"{k}={v}" for k, v in self.as_dict().items())
