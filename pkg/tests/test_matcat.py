import math
import random
from fractions import Fraction

import pytest

from opcat.matcat import (UNIT, DblMor, Mor, Obj, ShapeError, compose, dagger, dbl_compose,
                          dbl_dagger, dbl_identity, dbl_lift, dbl_trace, identity, is_dagger_iso,
                          is_positive, is_trace_class, lattice_factor, matrix, minimal_trace_check,
                          mor_from_json, mor_to_json, obj, symmetry, tensor, tensor_obj, trace,
                          zero_mor)
from opcat.semiring import BOOLEAN, CHAIN3, COMPLEX, GAUSSIAN, RATIONAL, GaussianRational

from helpers import INSTANCES, rand_mor, rand_obj
from laws import FAMILIES, run_family

Q = RATIONAL


def q(rows):
    return matrix(Q, [[Fraction(v) for v in r] for r in rows])


def test_rational_composition():
    assert compose(q([[1, 2], [3, 4]]), q([[0, 1], [1, 0]])) == q([[2, 1], [4, 3]])


def test_boolean_relational_composition():
    X, Y, Z = obj(["x0", "x1"]), obj(["y0", "y1"]), obj(["z0", "z1"])
    R = Mor(X, Y, [[1, 0], [0, 0]], BOOLEAN)   # x0 R y0
    S = Mor(Y, Z, [[0, 0], [1, 0]], BOOLEAN)   # y0 S z1
    assert compose(S, R).entries == ((0, 0), (1, 0))


def test_composition_rejects_mismatch():
    with pytest.raises(ShapeError):
        compose(q([[1, 2, 3]]), q([[1, 2, 3]]))
    with pytest.raises(ShapeError):
        compose(matrix(BOOLEAN, [[1]]), q([[1]]))


def test_kronecker_of_swaps_is_antidiagonal():
    X = q([[0, 1], [1, 0]])
    K = tensor(X, X)
    assert K.entries == q([[int(i + j == 3) for j in range(4)] for i in range(4)]).entries
    assert K.dom.labels == ("0,0", "0,1", "1,0", "1,1")


def test_tensor_labels_flatten_left_major():
    A, B, C = obj("ab"), obj("xy"), obj("uv")
    assert tensor_obj(A, B).labels == ("a,x", "a,y", "b,x", "b,y")
    assert (A @ B) @ C == A @ (B @ C)
    assert A @ UNIT == A == UNIT @ A


def test_gaussian_dagger_conjugates():
    i = GaussianRational(0, 1)
    f = matrix(GAUSSIAN, [[i]])
    assert dagger(f).entries[0][0] == GaussianRational(0, -1)


def test_dagger_iso_examples():
    h = 1 / math.sqrt(2)
    H = matrix(COMPLEX, [[h, h], [h, -h]])
    assert is_dagger_iso(H)
    assert not is_dagger_iso(q([[1, 1], [0, 1]]))
    assert is_dagger_iso(symmetry(obj(3), obj(2), Q))


def test_positivity_examples():
    assert not is_positive(q([[0, 1], [-1, 0]]))
    assert not is_positive(q([[1, 0], [0, -1]]))
    assert is_positive(q([[2, 1], [1, 1]]))
    assert not is_positive(q([[1, 2], [2, 1]]))
    g = q([[1, 2, 0], [0, 1, 3]])
    assert is_positive(compose(dagger(g), g))


@pytest.mark.parametrize("name", ["boolean", "chain3"])
def test_lattice_positivity_is_exact(name):
    # every symmetric matrix over a small lattice, checked against brute force
    S = INSTANCES[name]
    elems = list(S.elements())
    A = obj(2)
    factors = set()
    for k in (1, 2, 3):
        K = obj(k)
        for rows in _all_rows(elems, k, 2):
            g = Mor(A, K, rows, S)
            factors.add(compose(dagger(g), g).entries)
    for a in elems:
        for b in elems:
            for c in elems:
                f = Mor(A, A, [[a, b], [b, c]], S)
                assert is_positive(f) == (f.entries in factors), f.entries


def _all_rows(elems, nrows, ncols):
    import itertools
    for flat in itertools.product(elems, repeat=nrows * ncols):
        yield [list(flat[r * ncols:(r + 1) * ncols]) for r in range(nrows)]


def test_lattice_factor_reproduces():
    f = Mor(obj(3), obj(3), [[2, 1, 0], [1, 1, 0], [0, 0, 2]], CHAIN3)
    R = lattice_factor(f)
    assert R is not None and compose(dagger(R), R) == f


def test_zero_absorbs():
    rng = random.Random(3)
    A, B = rand_obj(rng), rand_obj(rng)
    f = rand_mor(Q, A, B, rng)
    assert compose(zero_mor(B, A, Q), f) == zero_mor(A, A, Q)
    assert tensor(f, zero_mor(A, B, Q)) == zero_mor(A @ A, B @ B, Q)
    assert trace(zero_mor(A, A, Q)) == 0


def test_trace_examples():
    assert trace(identity(obj(5), Q)) == 5
    X = obj(["x", "y"])
    delta = Mor(X, X, [[1, 0], [0, 0]], BOOLEAN)
    assert trace(delta) == 1
    assert trace(zero_mor(X, X, BOOLEAN)) == 0
    assert is_trace_class(delta)
    with pytest.raises(ShapeError):
        trace(q([[1, 2, 3]]))


def test_minimal_trace_examples():
    A = obj(2)
    e0 = Mor(UNIT, A, [[Fraction(1)], [Fraction(0)]], Q)
    assert minimal_trace_check(e0, dagger(e0)) == (1, 1)
    S = Mor(UNIT, obj(3), [[1], [0], [2]], CHAIN3)
    T = Mor(obj(3), UNIT, [[2, 2, 1]], CHAIN3)
    assert minimal_trace_check(S, T) == (1, 1)


def test_symmetry_is_involutive():
    A, B = obj(2), obj(3)
    s = symmetry(A, B, Q)
    assert compose(symmetry(B, A, Q), s) == identity(A @ B, Q)


def test_doubling_examples():
    rng = random.Random(0)
    A, B, C = obj(2), obj(3), obj(2)
    f, g = rand_mor(Q, A, B, rng), rand_mor(Q, B, C, rng)
    m = DblMor(f, rand_mor(Q, B, A, rng))
    assert dbl_dagger(dbl_dagger(m)) == m
    assert dbl_lift(compose(g, f)) == dbl_compose(dbl_lift(g), dbl_lift(f))
    assert dbl_trace(dbl_lift(identity(obj(2), Q))) == (2, 2)
    assert dbl_trace(dbl_identity(obj(3), Q)) == (3, 3)
    with pytest.raises(ShapeError):
        DblMor(f, f)


def test_json_round_trip():
    f = matrix(GAUSSIAN, [[GaussianRational(1, 2), GaussianRational(0, -1)]])
    assert mor_from_json(mor_to_json(f)) == f
    c = matrix(COMPLEX, [[0.5 + 0.25j]])
    assert mor_from_json(mor_to_json(c)) == c


def test_objects_need_distinct_labels():
    with pytest.raises(ShapeError):
        Obj(("x", "x"))


LAW_CASES = [(f, n) for f in sorted(FAMILIES) for n in sorted(INSTANCES)] + [("doubling", "rational")]


@pytest.mark.parametrize("family,name", LAW_CASES)
def test_law_sample(family, name):
    assert run_family(family, INSTANCES[name], 100, seed=17) == 100
