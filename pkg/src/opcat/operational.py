"""States, projective measurements and the evaluation rule over any Mat(S).

A state is a positive endomorphism of trace one; a measurement is a family of
self-adjoint idempotents, pairwise disjoint and complete. Evaluating a state
``s`` against a measurement ``{P_o}`` gives ``o ↦ Tr(s ∘ P_o)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .matcat import (Mor, Obj, ShapeError, compose, dagger, identity, is_dagger_iso,
                     is_positive, kron_all, tensor, trace, trace_of_composite)
from .semiring import Report, Semiring, SemiringError

Outcome = Hashable


class OperationalError(ValueError):
    pass


def join_outcomes(*labels: Outcome) -> tuple:
    """Flatten outcome labels into one tuple, so tensoring stays associative."""
    out: list = []
    for lab in labels:
        out.extend(lab if isinstance(lab, tuple) else (lab,))
    return tuple(out)


def format_outcome(o: Outcome) -> str:
    if isinstance(o, tuple):
        return "(" + ",".join(str(x) for x in o) + ")"
    return str(o)


class OutcomeDistribution(Mapping):
    """Finite-support map from outcome labels to scalars; zero elsewhere."""

    def __init__(self, weights: Mapping[Outcome, Any] | Iterable, S: Semiring):
        self.S = S
        self._w = dict(weights)

    def __getitem__(self, o):
        return self._w.get(o, self.S.zero)

    def __iter__(self):
        return iter(self._w)

    def __len__(self):
        return len(self._w)

    def __contains__(self, o):
        return o in self._w

    def total(self):
        return self.S.sum(self._w.values())

    def is_normalized(self) -> bool:
        return self.S.eq(self.total(), self.S.one)

    def __eq__(self, other):
        if not isinstance(other, OutcomeDistribution):
            return NotImplemented
        keys = set(self._w) | set(other._w)
        return self.S == other.S and all(self.S.eq(self[k], other[k]) for k in keys)

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"{format_outcome(k)}: {self.S.format(v)}" for k, v in self._w.items())
        return f"OutcomeDistribution({{{body}}})"


@dataclass(frozen=True, eq=False)
class State:
    matrix: Mor
    witness: Mor | None = None

    def __post_init__(self):
        m = self.matrix
        if not m.is_endo:
            raise OperationalError("a state is an endomorphism")
        if self.witness is not None:
            # ψ ∘ ψ† is positive by construction
            psi = self.witness
            if compose(psi, dagger(psi)) != m:
                raise OperationalError("purity witness does not reproduce the state")
        elif not is_positive(m):
            raise OperationalError("state matrix is not positive")
        if not m.S.eq(trace(m), m.S.one):
            raise OperationalError(f"state trace is {m.S.format(trace(m))}, not 1")

    @property
    def obj(self) -> Obj:
        return self.matrix.dom

    @property
    def S(self) -> Semiring:
        return self.matrix.S

    def __eq__(self, other):
        return isinstance(other, State) and self.matrix == other.matrix

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Measurement:
    outcomes: tuple
    projectors: tuple[Mor, ...]

    def __post_init__(self):
        outcomes = tuple(self.outcomes)
        projectors = tuple(self.projectors)
        if not projectors or len(outcomes) != len(projectors):
            raise OperationalError("need one projector per outcome, at least one")
        if len(set(outcomes)) != len(outcomes):
            raise OperationalError(f"duplicate outcome labels {outcomes}")
        A, S = projectors[0].dom, projectors[0].S
        for P in projectors:
            if P.dom != A or P.cod != A or P.S != S:
                raise OperationalError("projectors must be endomorphisms of one object")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "projectors", projectors)

    @property
    def obj(self) -> Obj:
        return self.projectors[0].dom

    @property
    def S(self) -> Semiring:
        return self.projectors[0].S

    def items(self):
        return zip(self.outcomes, self.projectors)

    def __getitem__(self, o) -> Mor:
        return self.projectors[self.outcomes.index(o)]


@dataclass(frozen=True, eq=False)
class Transformation:
    matrix: Mor

    def __post_init__(self):
        if not is_dagger_iso(self.matrix):
            raise OperationalError("transformation must be a dagger-isomorphism")

    @property
    def dom(self):
        return self.matrix.dom

    @property
    def cod(self):
        return self.matrix.cod


def state_from_pure(psi: Mor) -> State:
    """The state ``ψ ∘ ψ†`` of a unit vector ``ψ: I -> A``."""
    if len(psi.dom) != 1:
        raise ShapeError("a pure state vector has the unit object as domain")
    S = psi.S
    norm = compose(dagger(psi), psi).entries[0][0]
    if not S.eq(norm, S.one):
        raise OperationalError(f"vector norm is {S.format(norm)}, not 1")
    return State(compose(psi, dagger(psi)), psi)


def validate_measurement(m: Measurement) -> Report:
    report = Report()
    S = m.S
    A = m.obj
    zero_like = None
    for o, P in m.items():
        if compose(P, P) != P:
            report.fail(f"projector {format_outcome(o)} is not idempotent")
        if dagger(P) != P:
            report.fail(f"projector {format_outcome(o)} is not self-adjoint")
    for (o1, P1), (o2, P2) in itertools.combinations(m.items(), 2):
        prod = compose(P1, P2)
        if zero_like is None:
            zero_like = prod.map(lambda _: S.zero)
        if prod != zero_like:
            report.fail(f"projectors {format_outcome(o1)} and {format_outcome(o2)} overlap")
    if S.is_field:
        total = m.projectors[0]
        for P in m.projectors[1:]:
            total = Mor(A, A, [[S.add(x, y) for x, y in zip(r, q)]
                               for r, q in zip(total.entries, P.entries)], S)
        if total != identity(A, S):
            report.fail("projectors do not sum to the identity")
    elif S.is_lattice:
        n = len(A)
        for o, P in m.items():
            if any(P.entries[i][j] != S.zero for i in range(n) for j in range(n) if i != j):
                report.fail(f"projector {format_outcome(o)} is not a diagonal sub-identity")
        for x in range(n):
            if S.sum(P.entries[x][x] for P in m.projectors) != S.one:
                report.fail(f"cover does not reach top at {A.labels[x]}")
    else:
        raise SemiringError(f"no completeness rule for {S!r}")
    return report


def evaluate(s: State, m: Measurement) -> OutcomeDistribution:
    if s.obj != m.obj:
        raise ShapeError(f"state on {s.obj} measured on {m.obj}")
    return OutcomeDistribution(
        {o: trace_of_composite(s.matrix, P) for o, P in m.items()}, s.S)


def transform_state(f: Transformation, s: State) -> State:
    """``f_*(s) = f ∘ s ∘ f†``."""
    if f.dom != s.obj:
        raise ShapeError("transformation domain does not match the state")
    F = f.matrix
    witness = compose(F, s.witness) if s.witness is not None else None
    return State(compose(compose(F, s.matrix), dagger(F)), witness)


def transform_measurement(f: Transformation, m: Measurement) -> Measurement:
    """``f^*(P_o) = f† ∘ P_o ∘ f``, pulling a measurement on ``B`` back to ``A``."""
    if f.cod != m.obj:
        raise ShapeError("transformation codomain does not match the measurement")
    F = f.matrix
    Fd = dagger(F)
    return Measurement(m.outcomes, [compose(compose(Fd, P), F) for P in m.projectors])


def tensor_state(s: State, t: State) -> State:
    witness = None
    if s.witness is not None and t.witness is not None:
        witness = tensor(s.witness, t.witness)
    return State(tensor(s.matrix, t.matrix), witness)


def tensor_measurement(m: Measurement, n: Measurement) -> Measurement:
    outcomes, projectors = [], []
    for (o1, P1), (o2, P2) in itertools.product(m.items(), n.items()):
        outcomes.append(join_outcomes(o1, o2))
        projectors.append(tensor(P1, P2))
    return Measurement(outcomes, projectors)


def tensor_measurements(ms: Sequence[Measurement]) -> Measurement:
    if len(ms) == 1:
        m = ms[0]
        return Measurement([join_outcomes(o) for o in m.outcomes], m.projectors)
    outcomes = [join_outcomes(*os) for os in itertools.product(*(m.outcomes for m in ms))]
    projectors = [kron_all(ps) for ps in itertools.product(*(m.projectors for m in ms))]
    return Measurement(outcomes, projectors)


def state_equivalence(s: State, t: State) -> bool:
    """Whether no measurement distinguishes ``s`` from ``t``."""
    if s.obj != t.obj or s.S != t.S:
        raise ShapeError("states live on different objects or semirings")
    if s.S.is_lattice:
        # Tr(s ∘ Δ_T) only sees the diagonal of s
        n = len(s.obj)
        return all(s.matrix.entries[i][i] == t.matrix.entries[i][i] for i in range(n))
    return s.matrix == t.matrix


def basis_measurement(A: Obj, S: Semiring, outcomes: Sequence | None = None) -> Measurement:
    """Measure in the standard basis; outcome ``k`` selects element ``k``."""
    n = len(A)
    outcomes = list(outcomes) if outcomes is not None else list(A.labels)
    projectors = [Mor(A, A, [[S.one if i == j == k else S.zero for j in range(n)]
                             for i in range(n)], S) for k in range(n)]
    return Measurement(outcomes, projectors)
