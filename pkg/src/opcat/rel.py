"""Ω-valued relations: sub-identities, disjoint covers, domains, purification."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .matcat import UNIT, Mor, Obj, tensor_obj
from .operational import Measurement, OperationalError, State, state_from_pure
from .semiring import FiniteLattice, SemiringError, instance_from_json


class CoverError(OperationalError):
    pass


@dataclass(frozen=True, eq=False)
class OmegaSubset:
    """A function from a finite base set into the lattice ``L``."""

    base: Obj
    values: tuple[int, ...]
    L: FiniteLattice

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) != len(self.base):
            raise SemiringError("an Ω-subset assigns one element to every base point")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_map(cls, base: Obj, values: Mapping[str, Any], L: FiniteLattice) -> "OmegaSubset":
        missing = [x for x in base if x not in values]
        if missing:
            raise SemiringError(f"Ω-subset missing values for {missing}")
        return cls(base, tuple(L.parse(values[x]) for x in base), L)

    @classmethod
    def top(cls, base: Obj, L: FiniteLattice) -> "OmegaSubset":
        return cls(base, (L.top,) * len(base), L)

    @classmethod
    def empty(cls, base: Obj, L: FiniteLattice) -> "OmegaSubset":
        return cls(base, (L.bottom,) * len(base), L)

    def __getitem__(self, x: str | int):
        if isinstance(x, str):
            x = self.base.index(x)
        return self.values[x]

    def meet(self, other: "OmegaSubset") -> "OmegaSubset":
        return OmegaSubset(self.base, [self.L.meet(a, b) for a, b in zip(self.values, other.values)], self.L)

    def join(self, other: "OmegaSubset") -> "OmegaSubset":
        return OmegaSubset(self.base, [self.L.join(a, b) for a, b in zip(self.values, other.values)], self.L)

    def extent(self):
        """``⋁_x S(x)``; equal to top exactly when ``P_S`` has unit norm."""
        return self.L.sum(self.values)

    def __eq__(self, other):
        return (isinstance(other, OmegaSubset) and self.base == other.base
                and self.values == other.values and self.L == other.L)

    __hash__ = None

    def to_json(self) -> dict:
        return {"base": list(self.base.labels),
                "values": {x: self.L.format(v) for x, v in zip(self.base, self.values)}}


def omega_subset_from_json(data: dict, L: FiniteLattice) -> OmegaSubset:
    try:
        return OmegaSubset.from_map(Obj(tuple(data["base"])), data["values"], L)
    except KeyError as exc:
        raise SemiringError(f"Ω-subset missing key {exc}") from exc


@dataclass(frozen=True, eq=False)
class DisjointCover:
    outcomes: tuple
    parts: tuple[OmegaSubset, ...]

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts or len(self.parts) != len(self.outcomes):
            raise CoverError("need one Ω-subset per outcome")
        check_cover(self.parts)

    @property
    def base(self) -> Obj:
        return self.parts[0].base

    @property
    def L(self) -> FiniteLattice:
        return self.parts[0].L


def check_cover(parts: Sequence[OmegaSubset]) -> None:
    """Raise :class:`CoverError` unless parts meet pairwise to bottom and join to top."""
    L = parts[0].L
    base = parts[0].base
    for p in parts:
        if p.base != base or p.L != L:
            raise CoverError("cover parts live on different bases")
    for i, p in enumerate(parts):
        for j in range(i + 1, len(parts)):
            q = parts[j]
            for k, x in enumerate(base):
                if L.meet(p.values[k], q.values[k]) != L.bottom:
                    raise CoverError(f"parts {i} and {j} meet above bottom at {x!r}")
    for k, x in enumerate(base):
        joined = L.sum(p.values[k] for p in parts)
        if joined != L.top:
            raise CoverError(f"join of parts at {x!r} is {L.format(joined)}, not top")


def delta(S: OmegaSubset) -> Mor:
    """The sub-identity ``Δ_S``: ``S`` on the diagonal, bottom elsewhere."""
    n = len(S.base)
    L = S.L
    return Mor(S.base, S.base,
               [[S.values[i] if i == j else L.bottom for j in range(n)] for i in range(n)], L)


def pure_vector(S: OmegaSubset) -> Mor:
    """``S`` as a column ``I -> X``."""
    return Mor(UNIT, S.base, [[v] for v in S.values], S.L)


def pure_state(S: OmegaSubset) -> State:
    """``P_S`` with ``[x P_S y] = S(x) ∧ S(y)``."""
    return state_from_pure(pure_vector(S))


def measurement_from_cover(cover: DisjointCover) -> Measurement:
    return Measurement(cover.outcomes, [delta(p) for p in cover.parts])


def dom(s: State) -> OmegaSubset:
    """``x ↦ [x s x]``."""
    if not s.S.is_lattice:
        raise SemiringError("dom is defined for lattice-valued states")
    m = s.matrix
    return OmegaSubset(m.dom, [m.entries[i][i] for i in range(len(m.dom))], s.S)


def purify(s: State) -> State:
    """The pure state ``P_{dom(s)}``, which no measurement tells apart from ``s``."""
    return pure_state(dom(s))


def load_rel_scenario(data: dict):
    """Read a Rel(Ω) scenario file into ``(S, covers, sites)``.

    ``state`` maps product points (site labels joined by commas) to lattice
    elements; unlisted points are bottom. ``covers[site][setting][outcome]``
    maps base points to lattice elements, likewise defaulting to bottom.
    """
    try:
        L = instance_from_json(data.get("lattice", "boolean"))
        sites = list(data["sites"])
        bases = [Obj(tuple(data["bases"][s])) for s in sites]
        raw_state = data["state"]
        raw_covers = data["covers"]
    except KeyError as exc:
        raise SemiringError(f"rel scenario: missing key {exc}") from exc
    if not L.is_lattice:
        raise SemiringError("rel scenario needs a lattice instance")
    total = bases[0]
    for B in bases[1:]:
        total = tensor_obj(total, B)
    unknown = set(raw_state) - set(total.labels)
    if unknown:
        raise SemiringError(f"rel scenario: state mentions unknown points {sorted(unknown)}")
    S = OmegaSubset(total, [L.parse(raw_state.get(x, L.format(L.bottom))) for x in total], L)
    covers = []
    for s, B in zip(sites, bases):
        if s not in raw_covers:
            raise SemiringError(f"rel scenario: no covers for site {s!r}")
        per = {}
        for setting, parts in raw_covers[s].items():
            subsets = []
            for o, values in parts.items():
                full = {x: values.get(x, L.format(L.bottom)) for x in B}
                subsets.append(OmegaSubset.from_map(B, full, L))
            per[setting] = DisjointCover(list(parts), subsets)
        covers.append(per)
    return S, covers, sites
