"""Semiring-generic operational representations of dagger categories.

States and projective measurements in Mat(S), empirical probability tables
for multipartite scenarios, and exact locality / no-signalling classification.
"""

from .locality import (Classification, Infeasible, LhvModel, SignedRealization, Verdict,
                       classify, decide_local, rel_lhv_construct, signed_realize,
                       stoch_generate, stoch_realize, verify_lhv, verify_quantum_realization)
from .matcat import Mor, Obj, compose, dagger, identity, tensor, trace, zero_mor
from .operational import Measurement, State, evaluate, state_from_pure
from .scenario import EmpiricalModel, Scenario, empirical_from_operational, no_signalling_check
from .semiring import (BOOLEAN, CHAIN3, COMPLEX, GAUSSIAN, RATIONAL, GaussianRational,
                       lattice_validate, validate_semiring)

__all__ = [
    "BOOLEAN", "CHAIN3", "COMPLEX", "GAUSSIAN", "RATIONAL", "Classification", "EmpiricalModel",
    "GaussianRational", "Infeasible", "LhvModel", "Measurement", "Mor", "Obj", "Scenario",
    "SignedRealization", "State", "Verdict", "classify", "compose", "dagger", "decide_local",
    "empirical_from_operational", "evaluate", "identity", "lattice_validate",
    "no_signalling_check", "rel_lhv_construct", "signed_realize", "state_from_pure",
    "stoch_generate", "stoch_realize", "tensor", "trace", "validate_semiring", "verify_lhv",
    "verify_quantum_realization", "zero_mor",
]
__version__ = "0.1.0"
