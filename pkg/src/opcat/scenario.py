"""Multipartite empirical models: probability tables ``p(o|m)`` and their I/O.

Setting tuples and outcome tuples are ordered by site. Tables are keyed by
tuples of labels; in JSON they are written ``"(a,b)"``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .matcat import UNIT, Mor, Obj, ShapeError, tensor_obj
from .operational import (Measurement, OutcomeDistribution, State, evaluate,
                          format_outcome, state_from_pure, tensor_measurements,
                          validate_measurement)
from .semiring import COMPLEX, RATIONAL, Semiring, SemiringError, instance_from_json

SNAP_DENOMINATOR = 64
SNAP_TOLERANCE = 1e-6


class ModelError(ValueError):
    """Schema or consistency problem in a scenario or empirical model."""


def parse_tuple(key: str) -> tuple[str, ...]:
    key = key.strip()
    if not (key.startswith("(") and key.endswith(")")):
        raise ModelError(f"expected a tuple like '(a,b)', got {key!r}")
    return tuple(x.strip() for x in key[1:-1].split(","))


def _check_label(label: str) -> str:
    label = str(label)
    if not label or any(c in label for c in "(),"):
        raise ModelError(f"labels must be nonempty and avoid '(),': {label!r}")
    return label


@dataclass(frozen=True)
class Scenario:
    sites: tuple[str, ...]
    settings: tuple[tuple[str, ...], ...]
    outcomes: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        sites = tuple(_check_label(s) for s in self.sites)
        settings = tuple(tuple(_check_label(m) for m in ms) for ms in self.settings)
        outcomes = tuple(tuple(_check_label(o) for o in os) for os in self.outcomes)
        if not sites:
            raise ModelError("a scenario needs at least one site")
        if len(settings) != len(sites) or len(outcomes) != len(sites):
            raise ModelError("settings and outcomes are given per site")
        for s, ms, os in zip(sites, settings, outcomes):
            if not ms or len(set(ms)) != len(ms):
                raise ModelError(f"site {s!r} needs distinct settings, at least one")
            if not os or len(set(os)) != len(os):
                raise ModelError(f"site {s!r} needs distinct outcomes, at least one")
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "settings", settings)
        object.__setattr__(self, "outcomes", outcomes)

    @property
    def n(self) -> int:
        return len(self.sites)

    def setting_tuples(self) -> list[tuple[str, ...]]:
        return list(itertools.product(*self.settings))

    def outcome_tuples(self) -> list[tuple[str, ...]]:
        return list(itertools.product(*self.outcomes))


def bipartite(settings_a=("a", "a'"), settings_b=("b", "b'"), outcomes=("0", "1")) -> Scenario:
    return Scenario(("A", "B"), (tuple(settings_a), tuple(settings_b)),
                    (tuple(outcomes), tuple(outcomes)))


class EmpiricalModel:
    """``p(o|m)`` for every setting tuple ``m`` of a scenario."""

    def __init__(self, scenario: Scenario, table: Mapping[tuple, Mapping[tuple, Any]],
                 S: Semiring = RATIONAL):
        self.scenario = scenario
        self.S = S
        outs = set(scenario.outcome_tuples())
        built = {}
        for m in scenario.setting_tuples():
            if m not in table:
                raise ModelError(f"table has no entry for setting tuple {format_outcome(m)}")
            dist = dict(table[m])
            for o in dist:
                if o not in outs:
                    raise ModelError(f"unknown outcome tuple {format_outcome(o)} "
                                     f"under {format_outcome(m)}")
            built[m] = OutcomeDistribution({o: dist.get(o, S.zero)
                                            for o in scenario.outcome_tuples()}, S)
        extra = set(table) - set(built)
        if extra:
            raise ModelError(f"unknown setting tuple {format_outcome(sorted(extra)[0])}")
        self.table = built

    @classmethod
    def from_rows(cls, scenario: Scenario, rows: Mapping[tuple, Sequence], S: Semiring = RATIONAL):
        """Build from one row per setting tuple, in :meth:`Scenario.outcome_tuples` order."""
        outs = scenario.outcome_tuples()
        table = {}
        for m, row in rows.items():
            if len(row) != len(outs):
                raise ModelError(f"row {format_outcome(m)} needs {len(outs)} entries")
            table[m] = {o: S.parse(v) for o, v in zip(outs, row)}
        return cls(scenario, table, S)

    def p(self, o: tuple, m: tuple):
        return self.table[m][o]

    def row(self, m: tuple) -> list:
        return [self.table[m][o] for o in self.scenario.outcome_tuples()]

    def entries(self):
        for m in self.scenario.setting_tuples():
            for o in self.scenario.outcome_tuples():
                yield m, o, self.table[m][o]

    def is_normalized(self) -> bool:
        return all(d.is_normalized() for d in self.table.values())

    def __eq__(self, other):
        return (isinstance(other, EmpiricalModel) and self.scenario == other.scenario
                and self.S == other.S and all(self.table[m] == other.table[m] for m in self.table))

    __hash__ = None

    def __repr__(self):
        return f"EmpiricalModel({self.scenario.sites}, {self.S.kind})"


def empirical_from_operational(s: State, site_measurements: Sequence[Mapping[str, Measurement]],
                               sites: Sequence[str] | None = None,
                               check: bool = True) -> EmpiricalModel:
    """Evaluate ``s`` on every product measurement ``m_1 ⊗ ... ⊗ m_n``.

    ``site_measurements[i]`` maps setting labels of site ``i`` to measurements on
    that site's object; the objects must tensor to ``s.obj``.
    """
    n = len(site_measurements)
    sites = tuple(sites) if sites is not None else tuple(f"site{i}" for i in range(n))
    if len(sites) != n:
        raise ShapeError("one site name per site")
    objs = []
    outcomes = []
    for i, ms in enumerate(site_measurements):
        if not ms:
            raise ModelError(f"site {sites[i]!r} has no settings")
        site_objs = {m.obj for m in ms.values()}
        if len(site_objs) != 1:
            raise ShapeError(f"site {sites[i]!r} measurements act on different objects")
        objs.append(site_objs.pop())
        seen: list = []
        for m in ms.values():
            if check:
                report = validate_measurement(m)
                if not report:
                    raise ModelError(f"invalid measurement at site {sites[i]!r}: "
                                     + "; ".join(report.violations))
            for o in m.outcomes:
                if o not in seen:
                    seen.append(o)
        outcomes.append(tuple(str(o) for o in seen))
    total = objs[0]
    for A in objs[1:]:
        total = tensor_obj(total, A)
    if total != s.obj:
        raise ShapeError(f"site objects tensor to {len(total)} elements, state has {len(s.obj)}")
    scenario = Scenario(sites, tuple(tuple(ms) for ms in site_measurements), tuple(outcomes))
    table = {}
    for m in scenario.setting_tuples():
        joint = tensor_measurements([site_measurements[i][m[i]] for i in range(n)])
        dist = evaluate(s, joint)
        table[m] = {tuple(str(x) for x in o): dist[o] for o in joint.outcomes}
    return EmpiricalModel(scenario, table, s.S)


def marginal(e: EmpiricalModel, site: int, m: tuple, outcome: str):
    """``Σ_{o: o_site = outcome} p(o|m)`` for the full setting tuple ``m``."""
    if not 0 <= site < e.scenario.n:
        raise IndexError(f"no site {site}")
    if m not in e.table:
        raise KeyError(f"no setting tuple {format_outcome(m)}")
    if outcome not in e.scenario.outcomes[site]:
        raise KeyError(f"no outcome {outcome!r} at site {site}")
    S = e.S
    return S.sum(v for o, v in e.table[m].items() if o[site] == outcome)


def _reduced(e: EmpiricalModel, site: int, m: tuple) -> dict:
    """Distribution of the other sites' outcomes, summing out ``site``."""
    S = e.S
    out: dict = {}
    for o, v in e.table[m].items():
        key = o[:site] + o[site + 1:]
        out[key] = S.add(out.get(key, S.zero), v)
    return out


def signalling_witness(e: EmpiricalModel):
    """First ``(site, m, m')`` where changing only ``site``'s setting moves the
    joint marginal of the remaining sites, or ``None``."""
    sc = e.scenario
    S = e.S
    if sc.n == 1:
        return None
    for i in range(sc.n):
        for m in sc.setting_tuples():
            base = _reduced(e, i, m)
            for alt in sc.settings[i]:
                if alt == m[i]:
                    continue
                m2 = m[:i] + (alt,) + m[i + 1:]
                other = _reduced(e, i, m2)
                if any(not S.eq(base[k], other[k]) for k in base):
                    return i, m, m2
    return None


def no_signalling_check(e: EmpiricalModel) -> bool:
    """True iff no site's setting choice is visible in the other sites' statistics.

    For two sites this is exactly: each site's marginal is independent of the
    other site's setting.
    """
    return signalling_witness(e) is None


def site_marginals_independent(e: EmpiricalModel) -> bool:
    """Each single-site marginal depends only on that site's own setting."""
    sc = e.scenario
    S = e.S
    for i in range(sc.n):
        for mi in sc.settings[i]:
            tuples = [m for m in sc.setting_tuples() if m[i] == mi]
            for o in sc.outcomes[i]:
                vals = [marginal(e, i, m, o) for m in tuples]
                if any(not S.eq(v, vals[0]) for v in vals):
                    return False
    return True


def snap(value: complex | float, max_denominator: int = SNAP_DENOMINATOR,
         tolerance: float = SNAP_TOLERANCE) -> Fraction | None:
    """Nearest rational with small denominator, or ``None`` if none is close."""
    z = complex(value)
    if abs(z.imag) > tolerance:
        return None
    q = Fraction(z.real).limit_denominator(max_denominator)
    if abs(float(q) - z.real) > tolerance:
        return None
    return q


def rationalize(e: EmpiricalModel) -> EmpiricalModel | None:
    """Snap a floating table to exact rationals; ``None`` if any entry resists."""
    if e.S.is_exact and not e.S.is_lattice and e.S.kind == "rational":
        return e
    if e.S.is_lattice:
        return None
    table = {}
    for m, dist in e.table.items():
        row = {}
        for o, v in dist.items():
            q = snap(complex(v))
            if q is None:
                return None
            row[o] = q
        table[m] = row
    return EmpiricalModel(e.scenario, table, RATIONAL)


def exact_float_table(e: EmpiricalModel) -> EmpiricalModel:
    """The floating table as exact binary rationals (real parts)."""
    table = {m: {o: Fraction(complex(v).real) for o, v in d.items()} for m, d in e.table.items()}
    return EmpiricalModel(e.scenario, table, RATIONAL)


# -- JSON ---------------------------------------------------------------------

def model_to_json(e: EmpiricalModel) -> dict:
    sc = e.scenario
    return {
        "instance": e.S.to_json(),
        "sites": list(sc.sites),
        "settings": {s: list(ms) for s, ms in zip(sc.sites, sc.settings)},
        "outcomes": {s: list(os) for s, os in zip(sc.sites, sc.outcomes)},
        "table": {format_outcome(m): {format_outcome(o): e.S.format(e.table[m][o])
                                      for o in sc.outcome_tuples()}
                  for m in sc.setting_tuples()},
    }


def model_from_json(data: Any) -> EmpiricalModel:
    if not isinstance(data, dict):
        raise ModelError("model: expected a JSON object")
    for key in ("sites", "settings", "outcomes", "table"):
        if key not in data:
            raise ModelError(f"model: missing key {key!r}")
    try:
        S = instance_from_json(data.get("instance", "rational"))
    except SemiringError as exc:
        raise ModelError(f"model.instance: {exc}") from exc
    sites = tuple(data["sites"])
    try:
        settings = tuple(tuple(data["settings"][s]) for s in sites)
        outcomes = tuple(tuple(data["outcomes"][s]) for s in sites)
    except KeyError as exc:
        raise ModelError(f"model.settings/outcomes: no entry for site {exc}") from exc
    scenario = Scenario(sites, settings, outcomes)
    raw = data["table"]
    if not isinstance(raw, dict):
        raise ModelError("model.table: expected an object")
    table = {}
    for mkey, dist in raw.items():
        m = parse_tuple(mkey)
        if not isinstance(dist, dict):
            raise ModelError(f"model.table.{mkey}: expected an object")
        row = {}
        for okey, v in dist.items():
            try:
                row[parse_tuple(okey)] = S.parse(v)
            except SemiringError as exc:
                raise ModelError(f"model.table.{mkey}.{okey}: {exc}") from exc
        table[m] = row
    return EmpiricalModel(scenario, table, S)


def dump_model(e: EmpiricalModel) -> str:
    return json.dumps(model_to_json(e), indent=2, ensure_ascii=False)


def load_model(text: str) -> EmpiricalModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"not JSON: {exc}") from exc
    return model_from_json(data)


def operational_from_json(data: dict):
    """Read an operational scenario file.

    Returns ``(state, site_measurements, sites)`` ready for
    :func:`empirical_from_operational`. Matrices are row lists parsed in the
    file's ``instance``; each site's ``object`` lists its element labels.
    """
    try:
        S = instance_from_json(data.get("instance", "rational"))
        sites = list(data["sites"])
        objects = [Obj(tuple(data["objects"][s])) for s in sites]
        raw_state = data["state"]
        raw_meas = data["measurements"]
    except KeyError as exc:
        raise ModelError(f"scenario: missing key {exc}") from exc
    total = objects[0]
    for A in objects[1:]:
        total = tensor_obj(total, A)
    if isinstance(raw_state, dict) and "pure" in raw_state:
        psi = Mor(UNIT, total, [[S.parse(v)] for v in raw_state["pure"]], S)
        state = state_from_pure(psi)
    else:
        rows = raw_state["entries"] if isinstance(raw_state, dict) else raw_state
        state = State(Mor(total, total, [[S.parse(v) for v in r] for r in rows], S))
    site_meas = []
    for s, A in zip(sites, objects):
        if s not in raw_meas:
            raise ModelError(f"scenario.measurements: no entry for site {s!r}")
        per = {}
        for setting, projs in raw_meas[s].items():
            per[setting] = Measurement(
                list(projs), [Mor(A, A, [[S.parse(v) for v in r] for r in rows], S)
                              for rows in projs.values()])
        site_meas.append(per)
    return state, site_meas, sites


def complex_to_exact(e: EmpiricalModel) -> EmpiricalModel:
    """Prefer the snapped rational table; fall back to exact binary values."""
    if e.S != COMPLEX:
        return e
    snapped = rationalize(e)
    return snapped if snapped is not None else exact_float_table(e)
