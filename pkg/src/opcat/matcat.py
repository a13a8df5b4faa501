"""The category Mat(S) of finite sets and S-valued matrices.

Objects are ordered label tuples; a morphism ``f: A -> B`` stores its entries
as ``f.entries[b][a]`` (codomain row, domain column). The monoidal structure is
strict: ``A ⊗ B`` is the lexicographic product of labels, left factor major,
so associators and unitors are identities.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Sequence

from .semiring import (FiniteLattice, Semiring, SemiringError,
                       instance_from_json)


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class Obj:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        if len(set(labels)) != len(labels):
            raise ShapeError(f"object labels must be distinct: {labels}")
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def __matmul__(self, other: "Obj") -> "Obj":
        return tensor_obj(self, other)

    def __repr__(self):
        return f"Obj({list(self.labels)})"


UNIT = Obj(("*",))


def obj(labels: Sequence | int) -> Obj:
    if isinstance(labels, int):
        return Obj(tuple(str(i) for i in range(labels)))
    return Obj(tuple(labels))


def tensor_obj(a: Obj, b: Obj) -> Obj:
    if a == UNIT:
        return b
    if b == UNIT:
        return a
    return Obj(tuple(f"{x},{y}" for x in a for y in b))


@dataclass(frozen=True, eq=False)
class Mor:
    dom: Obj
    cod: Obj
    entries: tuple[tuple[Any, ...], ...]
    S: Semiring

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        if len(rows) != len(self.cod) or any(len(r) != len(self.dom) for r in rows):
            raise ShapeError(
                f"entry grid must be {len(self.cod)}x{len(self.dom)} (cod x dom)")
        object.__setattr__(self, "entries", rows)

    def __getitem__(self, key):
        row, col = key
        return self.entries[row][col]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.cod), len(self.dom)

    @property
    def is_endo(self) -> bool:
        return self.dom == self.cod

    def __eq__(self, other):
        if not isinstance(other, Mor):
            return NotImplemented
        return (self.dom == other.dom and self.cod == other.cod
                and self.S == other.S
                and all(self.S.eq(x, y) for r, q in zip(self.entries, other.entries)
                        for x, y in zip(r, q)))

    __hash__ = None

    def __matmul__(self, other: "Mor") -> "Mor":
        """``g @ f`` is ``g ∘ f``."""
        return compose(self, other)

    def __repr__(self):
        body = "; ".join(" ".join(str(self.S.format(x)) for x in r) for r in self.entries)
        return f"Mor({self.S.kind}, {len(self.dom)}->{len(self.cod)}, [{body}])"

    def map(self, fn) -> "Mor":
        return Mor(self.dom, self.cod, [[fn(x) for x in r] for r in self.entries], self.S)


def matrix(S: Semiring, rows: Sequence[Sequence], dom: Obj | None = None,
           cod: Obj | None = None) -> Mor:
    """Build a morphism from raw rows, parsing each entry with ``S.parse``."""
    grid = [[S.parse(x) for x in r] for r in rows]
    ncols = len(grid[0]) if grid else 0
    return Mor(dom or obj(ncols), cod or obj(len(grid)), grid, S)


def _check_same(f: Mor, g: Mor):
    if f.S != g.S:
        raise ShapeError(f"semiring mismatch: {f.S!r} vs {g.S!r}")


def identity(A: Obj, S: Semiring) -> Mor:
    n = len(A)
    return Mor(A, A, [[S.one if i == j else S.zero for j in range(n)] for i in range(n)], S)


def zero_mor(A: Obj, B: Obj, S: Semiring) -> Mor:
    return Mor(A, B, [[S.zero] * len(A) for _ in range(len(B))], S)


def compose(g: Mor, f: Mor) -> Mor:
    """``g ∘ f``: matrix product in the semiring (join of meets for lattices)."""
    _check_same(f, g)
    if f.cod != g.dom:
        raise ShapeError(f"cannot compose: cod {f.cod} != dom {g.dom}")
    S = f.S
    add, mul, zero = S.add, S.mul, S.zero
    fcols = list(zip(*f.entries)) if f.entries else [()] * len(f.dom)
    out = []
    for grow in g.entries:
        row = []
        for fcol in fcols:
            acc = zero
            for x, y in zip(grow, fcol):
                acc = add(acc, mul(x, y))
            row.append(acc)
        out.append(row)
    return Mor(f.dom, g.cod, out, S)


def dagger(f: Mor) -> Mor:
    conj = f.S.conj
    cols = zip(*f.entries) if f.entries else [()] * len(f.dom)
    return Mor(f.cod, f.dom, [[conj(x) for x in c] for c in cols], f.S)


def tensor(f: Mor, g: Mor) -> Mor:
    """Kronecker product, left factor major."""
    _check_same(f, g)
    mul = f.S.mul
    rows = [[mul(x, y) for x in frow for y in grow]
            for frow in f.entries for grow in g.entries]
    return Mor(tensor_obj(f.dom, g.dom), tensor_obj(f.cod, g.cod), rows, f.S)


def symmetry(A: Obj, B: Obj, S: Semiring) -> Mor:
    """The swap ``σ: A ⊗ B -> B ⊗ A`` as a permutation matrix."""
    na, nb = len(A), len(B)
    dom, cod = tensor_obj(A, B), tensor_obj(B, A)
    rows = [[S.zero] * (na * nb) for _ in range(na * nb)]
    for i in range(na):
        for j in range(nb):
            rows[j * na + i][i * nb + j] = S.one
    return Mor(dom, cod, rows, S)


def is_trace_class(f: Mor) -> bool:
    """Every finite endomorphism lies in the trace ideal."""
    return f.is_endo


def trace(f: Mor) -> Any:
    if not f.is_endo:
        raise ShapeError("trace needs an endomorphism")
    return f.S.sum(f.entries[i][i] for i in range(len(f.dom)))


def trace_of_composite(g: Mor, f: Mor) -> Any:
    """``Tr(g ∘ f)`` without forming the product."""
    _check_same(f, g)
    if f.cod != g.dom or g.cod != f.dom:
        raise ShapeError("trace_of_composite needs f: A->B, g: B->A")
    S = f.S
    add, mul = S.add, S.mul
    acc = S.zero
    for x, grow in enumerate(g.entries):
        for y, gxy in enumerate(grow):
            acc = add(acc, mul(gxy, f.entries[y][x]))
    return acc


def as_scalar(f: Mor) -> Any:
    if f.shape != (1, 1):
        raise ShapeError(f"not a scalar morphism: {f.shape}")
    return f.entries[0][0]


def minimal_trace_check(a: Mor, b: Mor) -> tuple[Any, Any]:
    """For ``a: I -> A`` and ``b: A -> I`` return ``(Tr(a∘b), b∘a)``.

    These agree: the trace of a morphism factoring through the unit is
    determined by the factorization alone.
    """
    if len(a.dom) != 1 or len(b.cod) != 1:
        raise ShapeError("need a: I -> A and b: A -> I")
    lhs = trace(compose(a, b))
    rhs = as_scalar(compose(b, a))
    assert a.S.eq(lhs, rhs), (lhs, rhs)
    return lhs, rhs


def is_dagger_iso(f: Mor) -> bool:
    fd = dagger(f)
    return (compose(fd, f) == identity(f.dom, f.S)
            and compose(f, fd) == identity(f.cod, f.S))


def is_hermitian(f: Mor) -> bool:
    return f.is_endo and dagger(f) == f


def is_positive(f: Mor) -> bool:
    """Decide whether ``f = g† ∘ g`` for some ``g``."""
    if not f.is_endo or not is_hermitian(f):
        return False
    if f.S.is_lattice:
        return lattice_factor(f) is not None
    if f.S.is_field:
        return _psd_by_elimination(f)
    raise SemiringError(f"no positivity rule for {f.S!r}")


def lattice_factor(f: Mor) -> Mor | None:
    """Return ``R`` with ``R† ∘ R = f`` for a lattice-valued ``f``, or ``None``.

    ``f`` must be symmetric with every entry below both matching diagonal
    entries. ``R`` then has one row per unordered pair ``{u, v}``, carrying
    ``f(u, v)`` at columns ``u`` and ``v``.
    """
    S = f.S
    n = len(f.dom)
    e = f.entries
    for x in range(n):
        for y in range(n):
            if e[x][y] != e[y][x]:
                return None
            if not S.leq(e[x][y], S.meet(e[x][x], e[y][y])):
                return None
    pairs = [(u, v) for u in range(n) for v in range(u, n)]
    rows = []
    for u, v in pairs:
        rows.append([e[u][v] if x in (u, v) else S.zero for x in range(n)])
    R = Mor(f.dom, Obj(tuple(f"{f.dom.labels[u]}|{f.dom.labels[v]}" for u, v in pairs)),
            rows, S)
    if compose(dagger(R), R) != f:
        return None
    return R


def _psd_by_elimination(f: Mor) -> bool:
    # symmetric Gaussian elimination (LDL†) with diagonal pivoting
    S = f.S
    eps = 0 if S.is_exact else getattr(S, "epsilon", 1e-9)
    a = [list(r) for r in f.entries]
    live = list(range(len(a)))
    while live:
        diag = {i: S.real(a[i][i]) for i in live}
        if any(d < -eps for d in diag.values()):
            return False
        p = max(live, key=lambda i: diag[i])
        if diag[p] <= eps:
            # all remaining pivots vanish, so the rest must vanish too
            return all(S.is_zero(a[i][j]) for i in live for j in live)
        live.remove(p)
        piv = a[p][p]
        for i in live:
            factor = S.div(a[i][p], piv)
            for j in live:
                a[i][j] = S.sub(a[i][j], S.mul(factor, a[p][j]))
    return True


def kron_all(mors: Sequence[Mor]) -> Mor:
    out = mors[0]
    for m in mors[1:]:
        out = tensor(out, m)
    return out


# -- doubling ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DblMor:
    """A forward/backward pair ``(fwd: A -> B, bwd: B -> A)``."""

    fwd: Mor
    bwd: Mor

    def __post_init__(self):
        if self.fwd.dom != self.bwd.cod or self.fwd.cod != self.bwd.dom:
            raise ShapeError("doubled morphism needs fwd: A->B and bwd: B->A")

    @property
    def dom(self):
        return self.fwd.dom

    @property
    def cod(self):
        return self.fwd.cod

    def __eq__(self, other):
        return isinstance(other, DblMor) and self.fwd == other.fwd and self.bwd == other.bwd

    __hash__ = None


def dbl_lift(f: Mor) -> DblMor:
    return DblMor(f, dagger(f))


def dbl_identity(A: Obj, S: Semiring) -> DblMor:
    i = identity(A, S)
    return DblMor(i, i)


def dbl_compose(g: DblMor, f: DblMor) -> DblMor:
    return DblMor(compose(g.fwd, f.fwd), compose(f.bwd, g.bwd))


def dbl_dagger(f: DblMor) -> DblMor:
    return DblMor(f.bwd, f.fwd)


def dbl_tensor(f: DblMor, g: DblMor) -> DblMor:
    return DblMor(tensor(f.fwd, g.fwd), tensor(f.bwd, g.bwd))


def dbl_trace(f: DblMor) -> tuple[Any, Any]:
    return trace(f.fwd), trace(f.bwd)


# -- JSON literals ------------------------------------------------------------

def mor_to_json(f: Mor) -> dict:
    return {
        "instance": f.S.to_json(),
        "dom": list(f.dom.labels),
        "cod": list(f.cod.labels),
        "entries": [[f.S.format(x) for x in r] for r in f.entries],
    }


def mor_from_json(data: dict, S: Semiring | None = None) -> Mor:
    """Read a matrix literal; ``dom``/``cod`` default to ``0..n-1``."""
    try:
        S = S or instance_from_json(data["instance"])
        rows = data["entries"]
    except KeyError as exc:
        raise SemiringError(f"matrix literal missing key {exc}") from exc
    if not rows or not rows[0]:
        raise ShapeError("matrix literal needs at least one entry")
    dom = Obj(tuple(data["dom"])) if "dom" in data else obj(len(rows[0]))
    cod = Obj(tuple(data["cod"])) if "cod" in data else obj(len(rows))
    return Mor(dom, cod, [[S.parse(x) for x in r] for r in rows], S)


def all_matrices(S: FiniteLattice, A: Obj, B: Obj):
    """Enumerate every morphism ``A -> B`` over a finite instance."""
    n = len(A) * len(B)
    for flat in itertools.product(S.elements(), repeat=n):
        yield Mor(A, B, [flat[i * len(A):(i + 1) * len(A)] for i in range(len(B))], S)
