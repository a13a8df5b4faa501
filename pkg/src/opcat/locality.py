"""Locality and no-signalling classification of empirical models.

Local models are exactly the convex mixtures of deterministic global
assignments ``λ ∈ O^M`` (see :func:`opcat.stoch.global_encoding`), so locality
is the exact LP

    d >= 0,  Σ_λ d(λ) = 1,  Σ_λ d(λ)·[λ gives o under m] = p(o|m).

Dropping ``d >= 0`` gives the signed (no-signalling) realizations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from . import lp
from .matcat import ShapeError, tensor_obj
from .operational import Measurement, State, format_outcome, validate_measurement
from .rel import DisjointCover, OmegaSubset, measurement_from_cover, pure_state
from .scenario import (EmpiricalModel, ModelError, Scenario, empirical_from_operational,
                       exact_float_table, model_from_json, model_to_json, no_signalling_check,
                       parse_tuple, rationalize, signalling_witness)
from .semiring import COMPLEX, EPSILON, RATIONAL, Report, Semiring
from .stoch import ClassicalState, GlobalEncoding, classical_evaluate, global_encoding


class NonRationalTableError(ModelError):
    pass


class Verdict(str, enum.Enum):
    LOCAL = "Local"
    NO_SIGNALLING_NONLOCAL = "NoSignallingNonlocal"
    SIGNALLING = "Signalling"

    def __str__(self):
        return self.value


@dataclass
class LhvModel:
    """Hidden variables with weights ``d`` and response tables ``q_λ(o|m)``."""

    scenario: Scenario
    hidden: tuple[str, ...]
    weights: dict[str, Any]
    responses: dict[str, dict[tuple, dict[tuple, Any]]]
    S: Semiring = RATIONAL


@dataclass
class SignedRealization:
    encoding: GlobalEncoding
    state: ClassicalState


@dataclass
class Infeasible:
    """No realization exists; ``certificate`` proves it.

    For the locality LP the certificate is a Farkas vector ``y`` over the rows
    of :func:`locality_system`; for signed realizations it is a vector with
    ``yᵀA = 0`` and ``yᵀb != 0``.
    """

    kind: str  # "farkas" | "inconsistent"
    certificate: list[Fraction]
    row_labels: list[str] = field(default_factory=list)


def exact_table(e: EmpiricalModel) -> EmpiricalModel:
    """Return ``e`` over exact rationals, snapping floating tables when possible."""
    if e.S == RATIONAL:
        return e
    if e.S == COMPLEX:
        snapped = rationalize(e)
        if snapped is not None:
            return snapped
    raise NonRationalTableError(f"classification needs a rational table, got {e.S.kind}")


def encoding_for(sc: Scenario) -> GlobalEncoding:
    return global_encoding(sc.settings, sc.outcomes)


def row_labels(sc: Scenario) -> list[str]:
    labels = [f"p{format_outcome(o)}|{format_outcome(m)}"
              for m in sc.setting_tuples() for o in sc.outcome_tuples()]
    return labels + ["normalization"]


def locality_system(e: EmpiricalModel, enc: GlobalEncoding | None = None):
    """Constraint matrix and right-hand side of the locality LP.

    Rows: one per ``(m, o)`` (setting tuples outer, outcome tuples inner),
    then the normalization row. Columns: ``enc.assignments`` in order.
    """
    sc = e.scenario
    enc = enc or encoding_for(sc)
    one, zero = Fraction(1), Fraction(0)
    A, b = [], []
    for m in sc.setting_tuples():
        idx = [enc.slot_index(i, mi) for i, mi in enumerate(m)]
        for o in sc.outcome_tuples():
            A.append([one if all(lam[k] == oi for k, oi in zip(idx, o)) else zero
                      for lam in enc.assignments])
            b.append(Fraction(e.table[m][o]))
    A.append([one] * len(enc))
    b.append(one)
    return A, b


def _deterministic_responses(sc: Scenario, enc: GlobalEncoding, lam: tuple) -> dict:
    out = {}
    for m in sc.setting_tuples():
        o_hit = tuple(lam[enc.slot_index(i, mi)] for i, mi in enumerate(m))
        out[m] = {o: Fraction(int(o == o_hit)) for o in sc.outcome_tuples()}
    return out


def decide_local(e: EmpiricalModel) -> LhvModel | Infeasible:
    """Find a local hidden-variable model for ``e`` or prove none exists."""
    e = exact_table(e)
    sc = e.scenario
    enc = encoding_for(sc)
    A, b = locality_system(e, enc)
    res = lp.find_feasible(A, b)
    if not res.feasible:
        assert lp.verify_farkas(A, b, res.farkas)
        return Infeasible("farkas", res.farkas, row_labels(sc))
    hidden, weights, responses = [], {}, {}
    for lam, w in zip(enc.assignments, res.x):
        if w:
            key = ",".join(lam)
            hidden.append(key)
            weights[key] = w
            responses[key] = _deterministic_responses(sc, enc, lam)
    return LhvModel(sc, tuple(hidden), weights, responses, RATIONAL)


def verify_lhv(e: EmpiricalModel, h: LhvModel) -> Report:
    """Check that ``h`` is a local hidden-variable model realizing ``e``.

    Works over rationals and lattices (sums become joins, products meets).
    """
    report = Report()
    S = h.S
    sc = e.scenario
    if sc != h.scenario:
        report.fail("scenario mismatch")
        return report
    if e.S != S:
        report.fail(f"table over {e.S.kind}, model over {S.kind}")
        return report
    nonneg = (lambda v: v >= 0) if S == RATIONAL else (lambda v: True)
    if set(h.weights) != set(h.hidden) or set(h.responses) != set(h.hidden):
        report.fail("weights and responses must cover the hidden set exactly")
        return report
    if not S.eq(S.sum(h.weights.values()), S.one):
        report.fail("hidden-variable weights do not sum to 1")
    for lam in h.hidden:
        if not nonneg(h.weights[lam]):
            report.fail(f"negative weight at λ={lam}")
    outs = sc.outcome_tuples()
    for lam in h.hidden:
        q = h.responses[lam]
        margs: dict = {}
        for m in sc.setting_tuples():
            if m not in q:
                report.fail(f"λ={lam} has no response for m={format_outcome(m)}")
                continue
            row = q[m]
            vals = [row.get(o, S.zero) for o in outs]
            if not S.eq(S.sum(vals), S.one) or not all(nonneg(v) for v in vals):
                report.fail(f"q_λ(·|m) is not a distribution at λ={lam}, m={format_outcome(m)}")
            site_marg = [{oi: S.zero for oi in sc.outcomes[i]} for i in range(sc.n)]
            for o in outs:
                v = row.get(o, S.zero)
                for i in range(sc.n):
                    site_marg[i][o[i]] = S.add(site_marg[i][o[i]], v)
            for i in range(sc.n):
                for oi, mg in site_marg[i].items():
                    key = (i, m[i], oi)
                    if key in margs and not S.eq(margs[key], mg):
                        report.fail(f"marginal of site {i} depends on other settings at "
                                    f"λ={lam}, m={format_outcome(m)}, o_i={oi}")
                    margs.setdefault(key, mg)
            for o in outs:
                prod = S.prod(site_marg[i][o[i]] for i in range(sc.n))
                if not S.eq(prod, row.get(o, S.zero)):
                    report.fail(f"q_λ(o|m) is not a product of marginals at "
                                f"(λ={lam}, o={format_outcome(o)}, m={format_outcome(m)})")
    for m in sc.setting_tuples():
        for o in outs:
            mix = S.sum(S.mul(h.responses[lam].get(m, {}).get(o, S.zero), h.weights[lam])
                        for lam in h.hidden)
            if not S.eq(mix, e.table[m][o]):
                report.fail(f"mixture misses p(o|m) at o={format_outcome(o)}, m={format_outcome(m)}")
    return report


def rel_lhv_construct(S: OmegaSubset, covers: Sequence[Mapping[str, DisjointCover]],
                      sites: Sequence[str] | None = None) -> LhvModel:
    """Local model for the Rel(Ω) table of ``P_S`` under per-site covers.

    Hidden variables are the points ``x`` of ``∏ X_i`` with ``d(x) = S(x)`` and
    ``q_x(o|m) = ⋀_i S^i_{m_i,o_i}(x_i)``.
    """
    L = S.L
    if S.extent() != L.top:
        raise ModelError("the Ω-subset must join to top")
    n = len(covers)
    sites = tuple(sites) if sites is not None else tuple(f"site{i}" for i in range(n))
    bases = [next(iter(c.values())).base for c in covers]
    total = bases[0]
    for B in bases[1:]:
        total = tensor_obj(total, B)
    if total != S.base:
        raise ShapeError("Ω-subset base is not the product of the cover bases")
    outcomes = []
    for c in covers:
        seen: list = []
        for cover in c.values():
            for o in cover.outcomes:
                if str(o) not in seen:
                    seen.append(str(o))
        outcomes.append(tuple(seen))
    sc = Scenario(sites, tuple(tuple(c) for c in covers), tuple(outcomes))
    sizes = [len(B) for B in bases]
    coords = []
    for k in range(len(total)):
        idx, rem = [], k
        for size in reversed(sizes):
            idx.append(rem % size)
            rem //= size
        coords.append(tuple(reversed(idx)))
    hidden = tuple(total.labels)
    weights = {x: S.values[k] for k, x in enumerate(hidden)}
    responses = {}
    for k, x in enumerate(hidden):
        table = {}
        for m in sc.setting_tuples():
            row = {}
            for o in sc.outcome_tuples():
                vals = []
                for i in range(n):
                    cover = covers[i][m[i]]
                    outs = [str(t) for t in cover.outcomes]
                    vals.append(cover.parts[outs.index(o[i])].values[coords[k][i]]
                                if o[i] in outs else L.bottom)
                row[o] = L.prod(vals)
            table[m] = row
        responses[x] = table
    return LhvModel(sc, hidden, weights, responses, L)


def rel_empirical(S: OmegaSubset, covers: Sequence[Mapping[str, DisjointCover]],
                  sites: Sequence[str] | None = None, state: State | None = None) -> EmpiricalModel:
    """The empirical model of ``P_S`` (or ``state``) under cover measurements."""
    meas = [{k: measurement_from_cover(c) for k, c in site.items()} for site in covers]
    return empirical_from_operational(state or pure_state(S), meas, sites)


def stoch_generate(s: ClassicalState, scenario: Scenario) -> EmpiricalModel:
    """Push a (possibly signed) distribution on ``O^M`` through every ``m̂``."""
    enc = encoding_for(scenario)
    if s.base != enc.obj:
        raise ShapeError("state must live on the global assignments of the scenario")
    table = {}
    for m in scenario.setting_tuples():
        dist = classical_evaluate(s, enc.hat(m))
        table[m] = {o: dist[o] for o in scenario.outcome_tuples()}
    return EmpiricalModel(scenario, table, RATIONAL)


def _stoch_system(e: EmpiricalModel, enc: GlobalEncoding):
    # built from the random variables m̂ rather than from slot lookups
    sc = e.scenario
    A, b = [], []
    for m in sc.setting_tuples():
        hat = enc.hat(m)
        for o in sc.outcome_tuples():
            A.append([Fraction(int(label == o)) for label in hat.labels])
            b.append(Fraction(e.table[m][o]))
    A.append([Fraction(1)] * len(enc))
    b.append(Fraction(1))
    return A, b


def stoch_realize(e: EmpiricalModel) -> ClassicalState | Infeasible:
    """A probability distribution on ``O^M`` generating ``e``, if one exists."""
    e = exact_table(e)
    enc = encoding_for(e.scenario)
    A, b = _stoch_system(e, enc)
    res = lp.find_feasible(A, b)
    if not res.feasible:
        assert lp.verify_farkas(A, b, res.farkas)
        return Infeasible("farkas", res.farkas, row_labels(e.scenario))
    state = ClassicalState(enc.obj, res.x)
    assert stoch_generate(state, e.scenario) == e
    return state


def signed_realize(e: EmpiricalModel) -> SignedRealization | Infeasible:
    """A signed distribution on ``O^M`` generating ``e``, if one exists."""
    e = exact_table(e)
    enc = encoding_for(e.scenario)
    A, b = _stoch_system(e, enc)
    sol = lp.solve_equalities(A, b)
    if sol.x is None:
        assert lp.verify_inconsistency(A, b, sol.certificate)
        result: SignedRealization | Infeasible = Infeasible(
            "inconsistent", sol.certificate, row_labels(e.scenario))
    else:
        state = ClassicalState(enc.obj, sol.x, signed=True)
        assert stoch_generate(state, e.scenario) == e
        result = SignedRealization(enc, state)
    if e.is_normalized():
        assert isinstance(result, SignedRealization) == no_signalling_check(e)
    return result


def verify_quantum_realization(e: EmpiricalModel, state: State,
                               site_measurements: Sequence[Mapping[str, Measurement]],
                               epsilon: float = EPSILON) -> bool:
    sc = e.scenario
    if len(site_measurements) != sc.n:
        raise ShapeError(f"scenario has {sc.n} sites, got {len(site_measurements)} measurement sets")
    for i, ms in enumerate(site_measurements):
        if tuple(ms) != sc.settings[i]:
            raise ShapeError(f"site {i} settings {tuple(ms)} differ from {sc.settings[i]}")
        # a perturbed projector is no realization, whatever numbers it produces
        if not all(validate_measurement(m).ok for m in ms.values()):
            return False
    got = empirical_from_operational(state, site_measurements, sc.sites, check=False)
    if got.scenario != sc:
        raise ShapeError("realization produces a different scenario")
    return all(abs(complex(v) - complex(got.table[m][o])) <= epsilon for m, o, v in e.entries())


def _check_probability_table(e: EmpiricalModel) -> None:
    for m, o, v in e.entries():
        if v < 0:
            raise ModelError(f"negative probability at {format_outcome(o)}|{format_outcome(m)}")
    for m, dist in e.table.items():
        if dist.total() != 1:
            raise ModelError(f"row {format_outcome(m)} sums to {dist.total()}")


@dataclass
class Classification:
    verdict: Verdict
    model: EmpiricalModel
    lhv: LhvModel | None = None
    farkas: Infeasible | None = None
    signed: SignedRealization | None = None
    inconsistency: Infeasible | None = None
    relaxed: bool = False
    residual: float | None = None


def classify(e: EmpiricalModel, epsilon: float | None = None) -> Classification:
    """Local, no-signalling but non-local, or signalling.

    Floating tables that do not snap to small-denominator rationals are
    classified with residual tolerance ``epsilon`` instead (no witnesses).
    """
    if e.S == COMPLEX and rationalize(e) is None:
        return _classify_relaxed(e, EPSILON if epsilon is None else epsilon)
    e = exact_table(e)
    _check_probability_table(e)
    local = decide_local(e)
    if isinstance(local, LhvModel):
        return Classification(Verdict.LOCAL, e, lhv=local)
    signed = signed_realize(e)
    if isinstance(signed, SignedRealization):
        return Classification(Verdict.NO_SIGNALLING_NONLOCAL, e, farkas=local, signed=signed)
    return Classification(Verdict.SIGNALLING, e, farkas=local, inconsistency=signed)


def _chebyshev_residual(A, b) -> Fraction:
    """``min_d max_r |A d - b|_r`` over distributions ``d``."""
    m, n = len(A), len(A[0])
    # variables: d (n), t, u (m), v (m);  A d + t - u = b,  A d - t + v = b
    rows, rhs = [], []
    for r in range(m):
        base = list(A[r])
        rows.append(base + [Fraction(1)] + [-Fraction(int(k == r)) for k in range(m)]
                    + [Fraction(0)] * m)
        rhs.append(b[r])
        rows.append(base + [Fraction(-1)] + [Fraction(0)] * m
                    + [Fraction(int(k == r)) for k in range(m)])
        rhs.append(b[r])
    rows.append([Fraction(1)] * n + [Fraction(0)] * (1 + 2 * m))
    rhs.append(Fraction(1))
    c = [Fraction(0)] * n + [Fraction(1)] + [Fraction(0)] * (2 * m)
    res = lp.minimize(c, rows, rhs)
    return res.objective


def _classify_relaxed(e: EmpiricalModel, epsilon: float) -> Classification:
    ex = exact_float_table(e)
    A, b = locality_system(ex)
    resid = _chebyshev_residual(A[:-1], b[:-1])
    if resid <= Fraction(epsilon):
        return Classification(Verdict.LOCAL, ex, relaxed=True, residual=float(resid))
    sc = ex.scenario
    for i in range(sc.n):
        for m in sc.setting_tuples():
            for alt in sc.settings[i]:
                m2 = m[:i] + (alt,) + m[i + 1:]
                for o in sc.outcome_tuples():
                    lhs = sum(v for o2, v in ex.table[m].items()
                              if o2[:i] + o2[i + 1:] == o[:i] + o[i + 1:])
                    rhs = sum(v for o2, v in ex.table[m2].items()
                              if o2[:i] + o2[i + 1:] == o[:i] + o[i + 1:])
                    if abs(lhs - rhs) > epsilon:
                        return Classification(Verdict.SIGNALLING, ex, relaxed=True,
                                              residual=float(resid))
    return Classification(Verdict.NO_SIGNALLING_NONLOCAL, ex, relaxed=True, residual=float(resid))


# -- certificates ---------------------------------------------------------------

def lhv_to_json(h: LhvModel) -> dict:
    S = h.S
    return {
        "hidden": list(h.hidden),
        "weights": {lam: S.format(h.weights[lam]) for lam in h.hidden},
        "responses": {
            lam: {format_outcome(m): {format_outcome(o): S.format(v) for o, v in row.items()}
                  for m, row in h.responses[lam].items()}
            for lam in h.hidden},
    }


def lhv_from_json(data: dict, scenario: Scenario, S: Semiring = RATIONAL) -> LhvModel:
    try:
        hidden = tuple(data["hidden"])
        weights = {lam: S.parse(data["weights"][lam]) for lam in hidden}
        responses = {lam: {parse_tuple(mk): {parse_tuple(ok): S.parse(v) for ok, v in row.items()}
                           for mk, row in data["responses"][lam].items()}
                     for lam in hidden}
    except KeyError as exc:
        raise ModelError(f"witness: missing key {exc}") from exc
    return LhvModel(scenario, hidden, weights, responses, S)


def certificate_to_json(c: Classification) -> dict:
    out: dict[str, Any] = {"verdict": c.verdict.value}
    if c.relaxed:
        out["relaxed"] = True
        out["residual"] = c.residual
    if c.lhv is not None:
        out["witness"] = lhv_to_json(c.lhv)
    if c.farkas is not None:
        out["farkas"] = [str(v) for v in c.farkas.certificate]
        out["rows"] = c.farkas.row_labels
    if c.signed is not None:
        out["signed"] = {a: str(w) for a, w in zip(c.signed.state.base.labels,
                                                    c.signed.state.weights)}
    if c.inconsistency is not None:
        out["inconsistency"] = [str(v) for v in c.inconsistency.certificate]
    out["model"] = model_to_json(c.model)
    return out


def verify_certificate(data: dict) -> Report:
    """Re-check an emitted classification certificate from scratch."""
    report = Report()
    try:
        verdict = Verdict(data["verdict"])
        e = model_from_json(data["model"])
    except (KeyError, ValueError) as exc:
        report.fail(f"certificate: {exc}")
        return report
    if data.get("relaxed"):
        report.fail("relaxed verdicts carry no exact certificate")
        return report
    e = exact_table(e)
    if verdict is Verdict.LOCAL:
        if "witness" not in data:
            report.fail("Local verdict without witness")
            return report
        h = lhv_from_json(data["witness"], e.scenario, RATIONAL)
        sub = verify_lhv(e, h)
        for v in sub.violations:
            report.fail(v)
        return report
    A, b = locality_system(e)
    y = [Fraction(v) for v in data.get("farkas", [])]
    if not lp.verify_farkas(A, b, y):
        report.fail("Farkas certificate does not verify")
    if verdict is Verdict.NO_SIGNALLING_NONLOCAL:
        enc = encoding_for(e.scenario)
        signed = data.get("signed", {})
        try:
            weights = [Fraction(signed[",".join(a)]) for a in enc.assignments]
            state = ClassicalState(enc.obj, weights, signed=True)
        except (KeyError, ValueError) as exc:
            report.fail(f"signed realization unusable: {exc}")
            return report
        if stoch_generate(state, e.scenario) != e:
            report.fail("signed realization does not generate the table")
    else:
        A2, b2 = _stoch_system(e, encoding_for(e.scenario))
        y2 = [Fraction(v) for v in data.get("inconsistency", [])]
        if not lp.verify_inconsistency(A2, b2, y2):
            report.fail("inconsistency certificate does not verify")
    return report


def signalling_summary(e: EmpiricalModel) -> str | None:
    w = signalling_witness(e)
    if w is None:
        return None
    i, m, m2 = w
    return (f"site {e.scenario.sites[i]} signals: others' statistics differ between "
            f"{format_outcome(m)} and {format_outcome(m2)}")
