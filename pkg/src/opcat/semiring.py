"""Scalar algebras: commutative semirings with involution.

Every matrix in :mod:`opcat.matcat` carries one of these instances. Scalars
themselves are plain Python values; the instance knows how to add, multiply,
conjugate and compare them:

============== =========================================
kind            payload
============== =========================================
boolean         ``int`` index into ``(bot, top)``
lattice         ``int`` index into the element list
rational        :class:`fractions.Fraction`
gaussian        :class:`GaussianRational`
complex         ``complex`` (compared with ``EPSILON``)
============== =========================================
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Any, Iterable, Sequence

EPSILON = 1e-9


class SemiringError(ValueError):
    pass


class LatticeError(SemiringError):
    """A meet/join table pair failed a lattice axiom."""

    def __init__(self, axiom: str, witness: tuple):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"{axiom} fails at {witness}")


@dataclass
class Report:
    """Outcome of a structural check; ``violations`` holds readable witnesses."""

    ok: bool = True
    violations: list[str] = field(default_factory=list)

    def fail(self, message: str) -> None:
        self.ok = False
        self.violations.append(message)

    def __bool__(self) -> bool:
        return self.ok


def parse_fraction(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise SemiringError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SemiringError(f"not a rational: {value!r}") from exc
    raise SemiringError(f"not a rational: {value!r}")


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other):
        other = _as_gauss(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_as_gauss(other))

    def __rsub__(self, other):
        return _as_gauss(other) - self

    def __mul__(self, other):
        o = _as_gauss(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_gauss(other)
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ZeroDivisionError("gaussian rational division by zero")
        num = self * o.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        im = "" if abs(self.im) == 1 else str(abs(self.im))
        if self.re == 0:
            return f"{'-' if self.im < 0 else ''}{im}i"
        return f"{self.re}{'-' if self.im < 0 else '+'}{im}i"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse ``"3"``, ``"2i"``, ``"-i"``, ``"1/2-3/4i"`` and the like."""
        t = text.replace(" ", "")
        try:
            if not t.endswith("i"):
                return cls(Fraction(t), Fraction(0))
            body = t[:-1]
            cut = max(body.rfind("+"), body.rfind("-"))
            re_text, im_text = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
            if im_text in ("", "+", "-"):
                im_text += "1"
            return cls(Fraction(re_text), Fraction(im_text))
        except (ValueError, ZeroDivisionError) as exc:
            raise SemiringError(f"not a gaussian rational: {text!r}") from exc


def _as_gauss(value) -> GaussianRational:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(Fraction(value), Fraction(0))
    raise TypeError(f"cannot treat {value!r} as a gaussian rational")


class Semiring:
    """Base class for scalar instances.

    Subclasses supply ``zero``, ``one``, ``add``, ``mul`` and ``conj``.
    ``is_lattice`` instances additionally provide ``leq``; ``is_field``
    instances provide ``sub``, ``div`` and ``neg``.
    """

    kind: str = ""
    is_lattice = False
    is_field = False
    is_exact = True
    involutive = True

    zero: Any
    one: Any

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def conj(self, a):
        return a

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero)

    def sum(self, values: Iterable) -> Any:
        return reduce(self.add, values, self.zero)

    def prod(self, values: Iterable) -> Any:
        return reduce(self.mul, values, self.one)

    def parse(self, value: Any):
        raise NotImplementedError

    def format(self, a) -> Any:
        return str(a)

    def elements(self) -> Sequence | None:
        """All elements for finite instances, ``None`` otherwise."""
        return None

    def sample(self, rng: random.Random):
        raise NotImplementedError

    def to_json(self) -> Any:
        return self.kind


class FiniteLattice(Semiring):
    """A finite distributive lattice given by meet and join tables.

    Addition is join, multiplication is meet and the involution is trivial.
    Construct through :func:`lattice_validate` unless the tables are
    already known to be valid.
    """

    is_lattice = True

    def __init__(self, labels: Sequence[str], meet: Sequence[Sequence[int]],
                 join: Sequence[Sequence[int]]):
        self.labels = tuple(labels)
        self.meet_table = tuple(tuple(r) for r in meet)
        self.join_table = tuple(tuple(r) for r in join)
        n = len(self.labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self.zero = next(i for i in range(n)
                         if all(self.meet_table[i][j] == i for j in range(n)))
        self.one = next(i for i in range(n)
                        if all(self.join_table[i][j] == i for j in range(n)))
        self.kind = "boolean" if n == 2 else "lattice"

    def __eq__(self, other):
        return (isinstance(other, FiniteLattice) and self.labels == other.labels
                and self.meet_table == other.meet_table
                and self.join_table == other.join_table)

    def __hash__(self):
        return hash((self.labels, self.meet_table))

    def __repr__(self):
        return f"FiniteLattice({list(self.labels)})"

    @property
    def bottom(self) -> int:
        return self.zero

    @property
    def top(self) -> int:
        return self.one

    def add(self, a, b):
        return self.join_table[a][b]

    def mul(self, a, b):
        return self.meet_table[a][b]

    join = add
    meet = mul

    def leq(self, a, b) -> bool:
        return self.meet_table[a][b] == a

    def parse(self, value):
        if isinstance(value, bool):
            return self.one if value else self.zero
        if isinstance(value, str) and value in self._index:
            return self._index[value]
        if self.kind == "boolean" and isinstance(value, int) and value in (0, 1):
            return self.one if value else self.zero
        raise SemiringError(f"unknown lattice element {value!r}; known: {list(self.labels)}")

    def format(self, a):
        return self.labels[a]

    def elements(self):
        return range(len(self.labels))

    def sample(self, rng):
        return rng.randrange(len(self.labels))

    def to_json(self):
        if self == BOOLEAN:
            return "boolean"
        return {
            "elements": list(self.labels),
            "meet": [[self.labels[x] for x in row] for row in self.meet_table],
            "join": [[self.labels[x] for x in row] for row in self.join_table],
        }


def lattice_validate(elements: Sequence[str], meet: Sequence[Sequence],
                     join: Sequence[Sequence]) -> FiniteLattice:
    """Check that the tables define a bounded distributive lattice.

    Table entries may be labels or integer indices. Raises
    :class:`LatticeError` naming the first failing axiom and a witness.
    """
    labels = list(elements)
    n = len(labels)
    if n == 0:
        raise LatticeError("nonempty", ())
    if len(set(labels)) != n:
        raise LatticeError("distinct labels", tuple(labels))
    index = {lab: i for i, lab in enumerate(labels)}

    def decode(table, name):
        if len(table) != n or any(len(row) != n for row in table):
            raise LatticeError(f"{name} table is {n}x{n}", (len(table),))
        out = []
        for i, row in enumerate(table):
            new = []
            for j, v in enumerate(row):
                if isinstance(v, str) and v in index:
                    new.append(index[v])
                elif isinstance(v, int) and not isinstance(v, bool) and 0 <= v < n:
                    new.append(v)
                else:
                    raise LatticeError(f"{name} table entries are elements",
                                       (labels[i], labels[j], v))
            out.append(new)
        return out

    m = decode(meet, "meet")
    j = decode(join, "join")
    r = range(n)
    lab = labels.__getitem__

    for op, name in ((m, "meet"), (j, "join")):
        for a in r:
            if op[a][a] != a:
                raise LatticeError(f"{name} idempotence", (lab(a),))
        for a, b in itertools.product(r, r):
            if op[a][b] != op[b][a]:
                raise LatticeError(f"{name} commutativity", (lab(a), lab(b)))
        for a, b, c in itertools.product(r, r, r):
            if op[op[a][b]][c] != op[a][op[b][c]]:
                raise LatticeError(f"{name} associativity", (lab(a), lab(b), lab(c)))
    for a, b in itertools.product(r, r):
        if m[a][j[a][b]] != a:
            raise LatticeError("absorption a∧(a∨b) = a", (lab(a), lab(b)))
        if j[a][m[a][b]] != a:
            raise LatticeError("absorption a∨(a∧b) = a", (lab(a), lab(b)))
    for a, b, c in itertools.product(r, r, r):
        if m[a][j[b][c]] != j[m[a][b]][m[a][c]]:
            raise LatticeError("distributivity a∧(b∨c) = (a∧b)∨(a∧c)",
                               (lab(a), lab(b), lab(c)))
    if not any(all(m[a][b] == a for b in r) for a in r):
        raise LatticeError("bottom element", ())
    if not any(all(j[a][b] == a for b in r) for a in r):
        raise LatticeError("top element", ())
    return FiniteLattice(labels, m, j)


def chain(labels: Sequence[str]) -> FiniteLattice:
    """The totally ordered lattice ``labels[0] < labels[1] < ...``."""
    n = len(labels)
    meet = [[min(a, b) for b in range(n)] for a in range(n)]
    join = [[max(a, b) for b in range(n)] for a in range(n)]
    return FiniteLattice(labels, meet, join)


def load_lattice(obj: dict) -> FiniteLattice:
    try:
        return lattice_validate(obj["elements"], obj["meet"], obj["join"])
    except KeyError as exc:
        raise SemiringError(f"lattice definition missing key {exc}") from exc


class RationalField(Semiring):
    kind = "rational"
    is_field = True
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def div(self, a, b):
        return a / b

    def real(self, a):
        return a

    def parse(self, value):
        return parse_fraction(value)

    def sample(self, rng):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 6))

    def __eq__(self, other):
        return type(other) is type(self)

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return "RationalField()"


class GaussianRationalField(RationalField):
    kind = "gaussian"
    zero = GaussianRational(0, 0)
    one = GaussianRational(1, 0)

    def conj(self, a):
        return a.conjugate()

    def real(self, a):
        return a.re

    def parse(self, value):
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, list) and len(value) == 2:
            return GaussianRational(parse_fraction(value[0]), parse_fraction(value[1]))
        if isinstance(value, str):
            return GaussianRational.parse(value)
        return GaussianRational(parse_fraction(value))

    def sample(self, rng):
        return GaussianRational(Fraction(rng.randint(-5, 5), rng.randint(1, 4)),
                                Fraction(rng.randint(-5, 5), rng.randint(1, 4)))

    def __repr__(self):
        return "GaussianRationalField()"


class ComplexDouble(Semiring):
    kind = "complex"
    is_field = True
    is_exact = False
    zero = 0j
    one = 1 + 0j

    def __init__(self, epsilon: float = EPSILON):
        self.epsilon = epsilon

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def div(self, a, b):
        return a / b

    def conj(self, a):
        return a.conjugate()

    def real(self, a):
        return a.real

    def eq(self, a, b):
        return (abs(a.real - b.real) <= self.epsilon
                and abs(a.imag - b.imag) <= self.epsilon)

    def parse(self, value):
        if isinstance(value, bool):
            raise SemiringError(f"not a complex number: {value!r}")
        if isinstance(value, (int, float, complex)):
            return complex(value)
        if isinstance(value, list) and len(value) == 2:
            return complex(float(value[0]), float(value[1]))
        if isinstance(value, str):
            try:
                return complex(value.replace("i", "j").replace(" ", ""))
            except ValueError:
                return complex(float(parse_fraction(value)))
        raise SemiringError(f"not a complex number: {value!r}")

    def format(self, a):
        return [a.real, a.imag]

    def sample(self, rng):
        return complex(rng.uniform(-1, 1), rng.uniform(-1, 1))

    def __eq__(self, other):
        return isinstance(other, ComplexDouble)

    def __hash__(self):
        return hash("complex")

    def __repr__(self):
        return "ComplexDouble()"


BOOLEAN = FiniteLattice(("bot", "top"), [[0, 0], [0, 1]], [[0, 1], [1, 1]])
CHAIN3 = chain(("bot", "a", "top"))
RATIONAL = RationalField()
GAUSSIAN = GaussianRationalField()
COMPLEX = ComplexDouble()

_NAMED = {"boolean": BOOLEAN, "rational": RATIONAL, "gaussian": GAUSSIAN,
          "gaussian-rational": GAUSSIAN, "complex": COMPLEX,
          "complex-double": COMPLEX, "chain3": CHAIN3}


def instance_from_json(obj: Any) -> Semiring:
    """Resolve an ``"instance"`` field: a name or an inline lattice definition."""
    if isinstance(obj, str):
        try:
            return _NAMED[obj]
        except KeyError:
            raise SemiringError(f"unknown semiring instance {obj!r}") from None
    if isinstance(obj, dict):
        return load_lattice(obj)
    raise SemiringError(f"bad semiring instance {obj!r}")


def validate_semiring(instance: Semiring, samples: int = 1000,
                      seed: int = 0) -> Report:
    """Check the commutative-semiring-with-involution axioms.

    Finite instances are checked on every triple; the others on ``samples``
    random triples.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    S = instance
    report = Report()
    elems = S.elements()
    if elems is not None:
        triples = itertools.product(elems, repeat=3)
    else:
        rng = random.Random(seed)
        triples = ((S.sample(rng), S.sample(rng), S.sample(rng)) for _ in range(samples))

    eq, add, mul, conj = S.eq, S.add, S.mul, S.conj
    for a, b, c in triples:
        checks = (
            ("additive associativity", add(add(a, b), c), add(a, add(b, c))),
            ("additive commutativity", add(a, b), add(b, a)),
            ("multiplicative associativity", mul(mul(a, b), c), mul(a, mul(b, c))),
            ("multiplicative commutativity", mul(a, b), mul(b, a)),
            ("distributivity", mul(a, add(b, c)), add(mul(a, b), mul(a, c))),
            ("additive unit", add(a, S.zero), a),
            ("multiplicative unit", mul(a, S.one), a),
            ("zero annihilates", mul(a, S.zero), S.zero),
            ("involution is additive", conj(add(a, b)), add(conj(a), conj(b))),
            ("involution is multiplicative", conj(mul(a, b)), mul(conj(a), conj(b))),
            ("involution squares to identity", conj(conj(a)), a),
        )
        for name, lhs, rhs in checks:
            if not eq(lhs, rhs):
                report.fail(f"{name}: {(S.format(a), S.format(b), S.format(c))}")
        if S.is_lattice:
            if mul(a, a) != a or add(a, a) != a:
                report.fail(f"idempotence: {S.format(a)}")
    if not (eq(conj(S.zero), S.zero) and eq(conj(S.one), S.one)):
        report.fail("involution must fix 0 and 1")
    return report
