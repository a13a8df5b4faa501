"""Random generators shared by the test modules."""

import cmath
import math
from fractions import Fraction

from opcat.matcat import Mor, Obj, compose, dagger, identity, obj, trace
from opcat.operational import Measurement, State, Transformation
from opcat.semiring import BOOLEAN, CHAIN3, COMPLEX, GAUSSIAN, RATIONAL, GaussianRational

INSTANCES = {
    "boolean": BOOLEAN,
    "chain3": CHAIN3,
    "rational": RATIONAL,
    "gaussian": GAUSSIAN,
    "complex": COMPLEX,
}


def rand_obj(rng, lo=1, hi=3, prefix="x"):
    n = rng.randint(lo, hi)
    return Obj(tuple(f"{prefix}{i}" for i in range(n)))


def rand_mor(S, A, B, rng):
    return Mor(A, B, [[S.sample(rng) for _ in A] for _ in B], S)


def _unit_scalar(S, rng):
    if S.is_lattice:
        return S.one
    if S == RATIONAL:
        return Fraction(rng.choice((1, -1)))
    if S == GAUSSIAN:
        return rng.choice((GaussianRational(1), GaussianRational(-1),
                           GaussianRational(0, 1), GaussianRational(0, -1)))
    return cmath.exp(1j * rng.uniform(0, 2 * math.pi))


def rand_dagger_iso(S, A, rng, B=None):
    """Phased permutation ``A -> B`` (plus a random rotation over complex doubles)."""
    B = B or A
    n = len(A)
    perm = list(range(n))
    rng.shuffle(perm)
    rows = [[S.zero] * n for _ in range(n)]
    for i, j in enumerate(perm):
        rows[j][i] = _unit_scalar(S, rng)
    f = Mor(A, B, rows, S)
    if S == COMPLEX and n >= 2:
        i, j = rng.sample(range(n), 2)
        t = rng.uniform(0, 2 * math.pi)
        rot = [[complex(int(r == c)) for c in range(n)] for r in range(n)]
        rot[i][i], rot[i][j] = math.cos(t), -math.sin(t)
        rot[j][i], rot[j][j] = math.sin(t), math.cos(t)
        f = compose(Mor(B, B, rot, S), f)
    return f


def rand_state(S, A, rng):
    n = len(A)
    if S.is_lattice:
        k = rng.randint(1, 3)
        vals = [[S.sample(rng) for _ in range(n)] for _ in range(k)]
        vals[rng.randrange(k)][rng.randrange(n)] = S.one
        R = Mor(A, obj(k), vals, S)
        return State(compose(dagger(R), R))
    while True:
        g = rand_mor(S, A, obj(rng.randint(1, 3)), rng)
        s = compose(dagger(g), g)
        t = trace(s)
        if not S.is_zero(t):
            break
    inv = S.div(S.one, t)
    return State(s.map(lambda x: S.mul(x, inv)))


def rand_partition(n, rng, max_parts=3):
    k = rng.randint(1, max_parts)
    return [rng.randrange(k) for _ in range(n)], k


def rand_measurement(S, A, rng, max_parts=3, prefix="o"):
    n = len(A)
    labels, k = rand_partition(n, rng, max_parts)
    projectors = []
    for part in range(k):
        projectors.append(Mor(A, A, [[S.one if i == j and labels[i] == part else S.zero
                                      for j in range(n)] for i in range(n)], S))
    m = Measurement([f"{prefix}{p}" for p in range(k)], projectors)
    if S.is_field:
        U = rand_dagger_iso(S, A, rng)
        Ud = dagger(U)
        m = Measurement(m.outcomes, [compose(compose(Ud, P), U) for P in m.projectors])
    return m


def rand_transformation(S, A, rng):
    return Transformation(rand_dagger_iso(S, A, rng))


def is_identity(f):
    return f == identity(f.dom, f.S)
