"""Exact rational linear programming for tiny dense problems.

``find_feasible`` decides ``A x = b, x >= 0`` with a phase-1 simplex (Bland's
rule, so it always terminates) and returns either a solution or a Farkas
certificate ``y`` with ``yᵀA <= 0`` and ``yᵀb > 0``. ``solve_equalities``
handles the unsigned case ``A x = b`` by Gauss-Jordan elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[Fraction]]


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list[Fraction] | None = None
    farkas: list[Fraction] | None = None
    objective: Fraction | None = None
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _frac_matrix(A: Matrix) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in A]


class _Tableau:
    """Dense simplex tableau with an explicit reduced-cost row."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.cost: list[Fraction] = []
        self.value = Fraction(0)
        self.pivots = 0

    def set_objective(self, c: Sequence[Fraction]) -> None:
        # reduced costs d_j = c_j - c_Bᵀ B⁻¹ A_j; value = c_Bᵀ B⁻¹ b
        d = list(c)
        value = Fraction(0)
        for i, bv in enumerate(self.basis):
            cb = c[bv]
            if cb:
                row = self.rows[i]
                for j, v in enumerate(row):
                    if v:
                        d[j] -= cb * v
                value += cb * self.rhs[i]
        self.cost = d
        self.value = value

    def pivot(self, r: int, col: int) -> None:
        row = self.rows[r]
        piv = row[col]
        if piv != 1:
            row = [v / piv for v in row]
            self.rows[r] = row
            self.rhs[r] /= piv
        nz = [j for j, v in enumerate(row) if v]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[col]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
                self.rhs[i] -= f * self.rhs[r]
        f = self.cost[col]
        if f:
            for j in nz:
                self.cost[j] -= f * row[j]
            self.value += f * self.rhs[r]
        self.basis[r] = col
        self.pivots += 1

    def run(self, allowed: Sequence[bool]) -> str:
        """Minimize with Bland's rule over columns flagged in ``allowed``."""
        while True:
            col = next((j for j, d in enumerate(self.cost) if d < 0 and allowed[j]), None)
            if col is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], col)


def _phase1(A: Matrix, b: Sequence[Fraction]):
    m = len(A)
    n = len(A[0]) if m else 0
    signs = [(-1 if Fraction(v) < 0 else 1) for v in b]
    rows = []
    for i, row in enumerate(_frac_matrix(A)):
        s = signs[i]
        rows.append([s * v for v in row] + [Fraction(int(i == k)) for k in range(m)])
    rhs = [abs(Fraction(v)) for v in b]
    tab = _Tableau(rows, rhs, [n + i for i in range(m)])
    tab.set_objective([Fraction(0)] * n + [Fraction(1)] * m)
    tab.run([True] * (n + m))
    return tab, signs, n, m


def find_feasible(A: Matrix, b: Sequence[Fraction]) -> LPResult:
    """Decide ``A x = b, x >= 0`` exactly."""
    if not A:
        raise ValueError("empty constraint matrix")
    tab, signs, n, m = _phase1(A, b)
    if tab.value > 0:
        # duals of the phase-1 optimum: π_i = 1 - d_{artificial i}
        y = [signs[i] * (1 - tab.cost[n + i]) for i in range(m)]
        return LPResult("infeasible", farkas=y, pivots=tab.pivots)
    x = [Fraction(0)] * n
    for i, bv in enumerate(tab.basis):
        if bv < n:
            x[bv] = tab.rhs[i]
    return LPResult("optimal", x=x, objective=Fraction(0), pivots=tab.pivots)


def minimize(c: Sequence[Fraction], A: Matrix, b: Sequence[Fraction]) -> LPResult:
    """Minimize ``cᵀx`` subject to ``A x = b, x >= 0``."""
    tab, signs, n, m = _phase1(A, b)
    if tab.value > 0:
        y = [signs[i] * (1 - tab.cost[n + i]) for i in range(m)]
        return LPResult("infeasible", farkas=y, pivots=tab.pivots)
    # drive artificials out of the basis; rows where that fails are redundant
    for i in range(m):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if col is not None:
                tab.set_objective([Fraction(0)] * (n + m))
                tab.pivot(i, col)
    tab.set_objective([Fraction(v) for v in c] + [Fraction(0)] * m)
    status = tab.run([True] * n + [False] * m)
    if status == "unbounded":
        return LPResult("unbounded", pivots=tab.pivots)
    x = [Fraction(0)] * n
    for i, bv in enumerate(tab.basis):
        if bv < n:
            x[bv] = tab.rhs[i]
    return LPResult("optimal", x=x, objective=sum(ci * xi for ci, xi in zip(c, x)),
                    pivots=tab.pivots)


def verify_solution(A: Matrix, b: Sequence[Fraction], x: Sequence[Fraction]) -> bool:
    if any(v < 0 for v in x):
        return False
    return all(sum(Fraction(a) * v for a, v in zip(row, x)) == Fraction(bi)
               for row, bi in zip(A, b))


def verify_farkas(A: Matrix, b: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    """Check ``yᵀA <= 0`` on every column and ``yᵀb > 0`` by substitution."""
    if len(y) != len(A):
        return False
    n = len(A[0])
    for j in range(n):
        if sum(Fraction(y[i]) * Fraction(A[i][j]) for i in range(len(A))) > 0:
            return False
    return sum(Fraction(yi) * Fraction(bi) for yi, bi in zip(y, b)) > 0


@dataclass
class LinearSolve:
    x: list[Fraction] | None
    certificate: list[Fraction] | None  # y with yᵀA = 0 and yᵀb != 0
    rank: int


def solve_equalities(A: Matrix, b: Sequence[Fraction]) -> LinearSolve:
    """Solve ``A x = b`` exactly; free variables are set to zero."""
    m = len(A)
    n = len(A[0]) if m else 0
    # augmented with an identity block to recover the inconsistency certificate
    rows = [[Fraction(v) for v in A[i]] + [Fraction(b[i])]
            + [Fraction(int(i == k)) for k in range(m)] for i in range(m)]
    pivots = []
    r = 0
    for col in range(n):
        p = next((i for i in range(r, m) if rows[i][col] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][col]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if rows[i][n] != 0:
            return LinearSolve(None, rows[i][n + 1:], r)
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = rows[i][n]
    return LinearSolve(x, None, r)


def verify_inconsistency(A: Matrix, b: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    n = len(A[0])
    if any(sum(Fraction(y[i]) * Fraction(A[i][j]) for i in range(len(A))) != 0
           for j in range(n)):
        return False
    return sum(Fraction(yi) * Fraction(bi) for yi, bi in zip(y, b)) != 0
