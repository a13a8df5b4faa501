"""Built-in example models: the Bell-state table and the PR box."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .matcat import UNIT, Mor, obj, tensor_obj
from .operational import Measurement, State, state_from_pure
from .scenario import EmpiricalModel, Scenario, bipartite, empirical_from_operational
from .semiring import COMPLEX
from .stoch import ClassicalState, global_encoding

QUBIT = obj(("0", "1"))
QUBIT2 = tensor_obj(QUBIT, QUBIT)
BELL_ANGLES = {"a": 0.0, "a'": math.pi / 3, "b": 0.0, "b'": math.pi / 3}

F = Fraction
BELL_ROWS = {
    ("a", "b"): [F(1, 2), F(0), F(0), F(1, 2)],
    ("a", "b'"): [F(3, 8), F(1, 8), F(1, 8), F(3, 8)],
    ("a'", "b"): [F(3, 8), F(1, 8), F(1, 8), F(3, 8)],
    ("a'", "b'"): [F(1, 8), F(3, 8), F(3, 8), F(1, 8)],
}
PR_ROWS = {
    ("a", "b"): [F(1, 2), F(0), F(0), F(1, 2)],
    ("a'", "b"): [F(1, 2), F(0), F(0), F(1, 2)],
    ("a", "b'"): [F(1, 2), F(0), F(0), F(1, 2)],
    ("a'", "b'"): [F(0), F(1, 2), F(1, 2), F(0)],
}
# signed weights over {0,1}^M, slots ordered (a, b, a', b'), most significant first
PR_WITNESS = [F(1, 2), F(0), F(0), F(0), F(-1, 2), F(0), F(1, 2), F(0),
              F(-1, 2), F(1, 2), F(0), F(0), F(1, 2), F(0), F(0), F(0)]


def bell_state() -> State:
    """``(|00> + |11>)/√2`` over complex doubles."""
    r = 1 / math.sqrt(2)
    psi = Mor(UNIT, QUBIT2, [[r + 0j], [0j], [0j], [r + 0j]], COMPLEX)
    return state_from_pure(psi)


def xy_measurement(theta: float) -> Measurement:
    """Spin along ``cos θ X + sin θ Y``: outcome ``0`` is ``+1``, ``1`` is ``-1``."""
    phase = cmath.exp(1j * theta)

    def proj(sign):
        return Mor(QUBIT, QUBIT, [[0.5 + 0j, sign * 0.5 * phase.conjugate()],
                                  [sign * 0.5 * phase, 0.5 + 0j]], COMPLEX)

    return Measurement(["0", "1"], [proj(1), proj(-1)])


def bell_measurements(angles: dict[str, float] = BELL_ANGLES):
    return [{m: xy_measurement(angles[m]) for m in ("a", "a'")},
            {m: xy_measurement(angles[m]) for m in ("b", "b'")}]


def bell_model() -> EmpiricalModel:
    """The Bell table as computed from the quantum realization (floating)."""
    return empirical_from_operational(bell_state(), bell_measurements(), ("A", "B"))


def bell_table() -> EmpiricalModel:
    return EmpiricalModel.from_rows(bipartite(), BELL_ROWS)


def pr_table() -> EmpiricalModel:
    return EmpiricalModel.from_rows(bipartite(), PR_ROWS)


def pr_witness(scenario: Scenario | None = None) -> ClassicalState:
    sc = scenario or bipartite()
    enc = global_encoding(sc.settings, sc.outcomes)
    return ClassicalState(enc.obj, PR_WITNESS, signed=True)


def product_table() -> EmpiricalModel:
    """Independent biased coins at both sites: a local table."""
    pa = {"a": F(1, 3), "a'": F(1, 2)}
    pb = {"b": F(1, 4), "b'": F(2, 3)}
    rows = {}
    for ma, qa in pa.items():
        for mb, qb in pb.items():
            rows[(ma, mb)] = [qa * qb, qa * (1 - qb), (1 - qa) * qb, (1 - qa) * (1 - qb)]
    return EmpiricalModel.from_rows(bipartite(), rows)
