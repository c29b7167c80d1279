"""Local martingales in the filtration generated by one random jump time."""

__version__ = "0.1.0"

from .compensator import (CompensatorResult, JumpMarkSpec, check_locally_integrable,  # noqa: E402
                          compensate, compensated_process, compensator_path,
                          expected_total_mark, survival_from_K)
from .errors import *  # noqa: E402,F401,F403
from .functions import RealFunction, as_function  # noqa: E402
from .integrate import (IntegralResult, atomic_oracle, cumulative, improper_integral,  # noqa: E402
                        local_integrability, stieltjes_integral, truncation_sequence)
from .measure import Distribution, EndpointCase  # noqa: E402
from .settings import Settings  # noqa: E402
from .simulate import (PathSample, SimulationReport, empirical_type_diagnostics,  # noqa: E402
                       sample_paths, simulate)
from .solver import (ConditionMPair, DerivativePair, MartingaleType, NoiseSpec,  # noqa: E402
                     Representation, SigmaStatus, classify, decompose, sigma_status,
                     solve_F_from_H, solve_H_from_F, verify_condition_m,
                     verify_martingale_property)
