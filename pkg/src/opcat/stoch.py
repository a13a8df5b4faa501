"""Classical and signed stochastic maps, distribution states, random variables.

Everything here is exact rational arithmetic. Signed variants only drop the
nonnegativity requirement; rows (and state weights) still sum to one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

from .matcat import Obj
from .operational import OutcomeDistribution
from .semiring import RATIONAL, parse_fraction


class StochError(ValueError):
    pass


def _fractions(values) -> tuple[Fraction, ...]:
    return tuple(v if isinstance(v, Fraction) else parse_fraction(v) for v in values)


@dataclass(frozen=True)
class StochMor:
    """Row-stochastic matrix ``X -> Y``; ``rows[x][y]`` is the weight of ``y`` given ``x``."""

    dom: Obj
    cod: Obj
    rows: tuple[tuple[Fraction, ...], ...]
    signed: bool = False

    def __post_init__(self):
        rows = tuple(_fractions(r) for r in self.rows)
        if len(rows) != len(self.dom) or any(len(r) != len(self.cod) for r in rows):
            raise StochError("stochastic matrix shape must be |dom| x |cod|")
        for x, r in zip(self.dom, rows):
            if sum(r) != 1:
                raise StochError(f"row {x!r} sums to {sum(r)}")
            if not self.signed and any(v < 0 for v in r):
                raise StochError(f"row {x!r} has a negative entry")
        object.__setattr__(self, "rows", rows)

    def then(self, other: "StochMor") -> "StochMor":
        """Sequential composite: first ``self``, then ``other``."""
        if self.cod != other.dom:
            raise StochError("cannot compose stochastic maps: codomain mismatch")
        cols = list(zip(*other.rows))
        rows = [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows]
        return StochMor(self.dom, other.cod, rows, self.signed or other.signed)

    def apply(self, s: "ClassicalState") -> "ClassicalState":
        if s.base != self.dom:
            raise StochError("state base does not match the map domain")
        cols = zip(*self.rows)
        return ClassicalState(self.cod, [sum(w * v for w, v in zip(s.weights, c)) for c in cols],
                              self.signed or s.signed)


def deterministic(f: Callable[[str], str] | Mapping[str, str], X: Obj, Y: Obj) -> StochMor:
    """Embed a function as the stochastic map with rows ``δ_{f(x)}``."""
    fn = f.__getitem__ if isinstance(f, Mapping) else f
    rows = [[Fraction(1) if fn(x) == y else Fraction(0) for y in Y] for x in X]
    return StochMor(X, Y, rows)


def identity_stoch(X: Obj) -> StochMor:
    return deterministic(lambda x: x, X, X)


@dataclass(frozen=True)
class ClassicalState:
    base: Obj
    weights: tuple[Fraction, ...]
    signed: bool = False

    def __post_init__(self):
        weights = _fractions(self.weights)
        if len(weights) != len(self.base):
            raise StochError("one weight per base element")
        if sum(weights) != 1:
            raise StochError(f"weights sum to {sum(weights)}, not 1")
        if not self.signed and any(w < 0 for w in weights):
            raise StochError("negative weight in an unsigned state")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def point(cls, base: Obj, x: str) -> "ClassicalState":
        return cls(base, [Fraction(int(y == x)) for y in base])

    @classmethod
    def uniform(cls, base: Obj) -> "ClassicalState":
        n = len(base)
        return cls(base, [Fraction(1, n)] * n)

    def __getitem__(self, x: str) -> Fraction:
        return self.weights[self.base.index(x)]


@dataclass(frozen=True)
class ClassicalMeasurement:
    """A random variable: each base element is sent to one outcome label."""

    base: Obj
    labels: tuple[Hashable, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(labels) != len(self.base):
            raise StochError("one outcome per base element")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_function(cls, base: Obj, fn: Callable[[str], Hashable]) -> "ClassicalMeasurement":
        return cls(base, [fn(x) for x in base])

    def __call__(self, x: str) -> Hashable:
        return self.labels[self.base.index(x)]


def classical_evaluate(s: ClassicalState, m: ClassicalMeasurement) -> OutcomeDistribution:
    """Pushforward ``o ↦ Σ_{m(x)=o} s(x)``."""
    if s.base != m.base:
        raise StochError("state and measurement live on different sets")
    out: dict = {}
    for w, o in zip(s.weights, m.labels):
        out[o] = out.get(o, Fraction(0)) + w
    return OutcomeDistribution(out, RATIONAL)


def classical_pushforward(f: Callable[[str], str] | Mapping[str, str], s: ClassicalState,
                          Y: Obj) -> ClassicalState:
    fn = f.__getitem__ if isinstance(f, Mapping) else f
    acc = {y: Fraction(0) for y in Y}
    for x, w in zip(s.base, s.weights):
        y = fn(x)
        if y not in acc:
            raise StochError(f"{x!r} maps outside the codomain: {y!r}")
        acc[y] += w
    return ClassicalState(Y, [acc[y] for y in Y], s.signed)


def pullback_measurement(f: Callable[[str], str] | Mapping[str, str], X: Obj,
                         m: ClassicalMeasurement) -> ClassicalMeasurement:
    """``m ∘ f`` as a random variable on ``X``."""
    fn = f.__getitem__ if isinstance(f, Mapping) else f
    return ClassicalMeasurement(X, [m(fn(x)) for x in X])


@dataclass(frozen=True)
class GlobalEncoding:
    """All joint assignments of outcomes to every (site, setting) pair.

    ``slots`` lists the pairs in significance order: settings by position,
    sites interleaved within each position, so two sites with settings
    ``(a, a')`` and ``(b, b')`` give ``(a, b, a', b')``. ``assignments``
    enumerates outcome tuples over the slots, most significant first.
    """

    slots: tuple[tuple[int, str], ...]
    slot_outcomes: tuple[tuple[str, ...], ...]
    assignments: tuple[tuple[str, ...], ...]

    @property
    def obj(self) -> Obj:
        return Obj(tuple(",".join(a) for a in self.assignments))

    def __len__(self):
        return len(self.assignments)

    def slot_index(self, site: int, setting: str) -> int:
        return self.slots.index((site, setting))

    def hat(self, settings: Sequence[str]) -> ClassicalMeasurement:
        """``m̂``: read off the outcomes of the chosen settings, one per site."""
        idx = [self.slot_index(i, m) for i, m in enumerate(settings)]
        return ClassicalMeasurement(self.obj, [tuple(a[k] for k in idx) for a in self.assignments])


def global_encoding(settings: Sequence[Sequence[str]],
                    outcomes: Sequence[Sequence[str]] | Sequence[str]) -> GlobalEncoding:
    """Enumerate ``O^M`` for per-site setting lists.

    ``outcomes`` is either one shared outcome list or one list per site.
    """
    if not settings or any(len(ms) == 0 for ms in settings):
        raise StochError("every site needs at least one setting")
    if outcomes and all(isinstance(o, str) for o in outcomes):
        per_site = [tuple(outcomes)] * len(settings)
    else:
        per_site = [tuple(o) for o in outcomes]
    if len(per_site) != len(settings) or any(len(o) == 0 for o in per_site):
        raise StochError("every site needs at least one outcome")
    depth = max(len(ms) for ms in settings)
    slots = [(i, ms[j]) for j in range(depth) for i, ms in enumerate(settings) if j < len(ms)]
    slot_outcomes = [per_site[i] for i, _ in slots]
    assignments = tuple(itertools.product(*slot_outcomes))
    return GlobalEncoding(tuple(slots), tuple(slot_outcomes), assignments)
