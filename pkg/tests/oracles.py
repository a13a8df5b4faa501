"""Independent reference computations used to cross-check the library.

Nothing here goes through the library's encoding or LP code: vertices are
built directly from response functions, densities with numpy.
"""

import itertools
from fractions import Fraction

import numpy as np

SETTINGS = (("a", "a'"), ("b", "b'"))
BITS = ("0", "1")
# row order of a 2x2x2 table: setting pairs, then outcome pairs, first site major
CELLS = [(ma, mb, oa, ob) for ma in SETTINGS[0] for mb in SETTINGS[1]
         for oa in BITS for ob in BITS]


def deterministic_vertices():
    """The 16 local deterministic tables, as 0/1 vectors over CELLS."""
    out = []
    for ra in itertools.product(BITS, repeat=2):
        for rb in itertools.product(BITS, repeat=2):
            resp_a = dict(zip(SETTINGS[0], ra))
            resp_b = dict(zip(SETTINGS[1], rb))
            out.append([int(resp_a[ma] == oa and resp_b[mb] == ob) for ma, mb, oa, ob in CELLS])
    return out


def table_vector(e):
    return [Fraction(e.table[(ma, mb)][(oa, ob)]) for ma, mb, oa, ob in CELLS]


def _exact_rank_rows(M):
    """Indices of a maximal set of independent rows of an exact matrix."""
    rows = [list(map(Fraction, r)) for r in M]
    basis, picked = [], []
    for i, r in enumerate(rows):
        v = r[:]
        for piv, b in basis:
            if v[piv]:
                f = v[piv] / b[piv]
                v = [x - f * y for x, y in zip(v, b)]
        nz = next((k for k, x in enumerate(v) if x), None)
        if nz is not None:
            basis.append((nz, v))
            picked.append(i)
    return picked


def _exact_solve(M, b):
    n = len(M)
    aug = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(M, b)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c])
        aug[c], aug[p] = aug[p], aug[c]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c] / aug[c][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [aug[i][n] / aug[i][i] for i in range(n)]


def brute_force_local(p):
    """Whether the 2x2x2 table ``p`` (vector over CELLS) is a convex mixture
    of deterministic tables, by exhaustive search over vertex bases.

    A point of a polytope is a nonnegative combination of some linearly
    independent set of vertices; trying every basis of the compatible
    vertices settles membership exactly. Returns the weights or ``None``.
    """
    p = [Fraction(v) for v in p]
    verts = [v for v in deterministic_vertices()
             if all(p[k] != 0 for k, bit in enumerate(v) if bit)]
    if not verts:
        return None
    target = p + [Fraction(1)]
    M = [[v[k] for v in verts] for k in range(len(p))] + [[1] * len(verts)]
    rows = _exact_rank_rows(M)
    r = len(rows)
    Mf = np.array(M, dtype=float)
    tf = np.array([float(t) for t in target])
    subsets = np.array(list(itertools.combinations(range(len(verts)), r)))
    sub = Mf[rows][:, subsets].transpose(1, 0, 2)
    ok = np.abs(np.linalg.det(sub)) > 1e-9
    subsets, sub = subsets[ok], sub[ok]
    if len(subsets) == 0:
        return None
    lam = np.linalg.solve(sub, np.broadcast_to(tf[rows], (len(sub), r))[..., None])[..., 0]
    full = np.zeros((len(sub), Mf.shape[1]))
    np.put_along_axis(full, subsets, lam, axis=1)
    resid = np.abs(full @ Mf.T - tf).max(axis=1)
    cand = np.nonzero((lam.min(axis=1) >= -1e-9) & (resid <= 1e-9))[0]
    for c in cand:
        B = list(subsets[c])
        exact = _exact_solve([[M[i][j] for j in B] for i in rows], [target[i] for i in rows])
        if min(exact) < 0:
            continue
        if all(sum(M[i][j] * w for j, w in zip(B, exact)) == target[i] for i in range(len(M))):
            return dict(zip(B, exact))
    return None


def grid_local(p, steps=8):
    """Search mixtures of deterministic tables with weights in ``1/steps``."""
    p = [Fraction(v) for v in p]
    verts = [v for v in deterministic_vertices()
             if all(p[k] != 0 for k, bit in enumerate(v) if bit)]
    need = [v * steps for v in p]

    def dfs(start, left, acc):
        if left == 0:
            return acc == need
        for j in range(start, len(verts)):
            nxt = [a + b for a, b in zip(acc, verts[j])]
            if all(a <= n for a, n in zip(nxt, need)) and dfs(j, left - 1, nxt):
                return True
        return False

    return dfs(0, steps, [0] * len(p))


def bell_probabilities(theta_a, theta_b):
    """Joint outcome probabilities for the maximally entangled state and
    spin measurements in the XY plane, via numpy density matrices."""
    phi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    rho = np.outer(phi, phi.conj())
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Y = np.array([[0, -1j], [1j, 0]])
    I = np.eye(2)

    def projectors(t):
        n = np.cos(t) * X + np.sin(t) * Y
        return [(I + n) / 2, (I - n) / 2]

    out = {}
    for oa, Pa in zip(BITS, projectors(theta_a)):
        for ob, Pb in zip(BITS, projectors(theta_b)):
            out[(oa, ob)] = float(np.real(np.trace(rho @ np.kron(Pa, Pb))))
    return out
