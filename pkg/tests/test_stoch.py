import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from opcat.matcat import obj
from opcat.stoch import (ClassicalMeasurement, ClassicalState, StochError, StochMor,
                         classical_evaluate, classical_pushforward, deterministic,
                         global_encoding, identity_stoch, pullback_measurement)

F = Fraction
N4 = obj(["1", "2", "3", "4"])


def test_point_mass_pushes_to_point_mass():
    m = ClassicalMeasurement.from_function(N4, lambda x: "even" if int(x) % 2 == 0 else "odd")
    d = classical_evaluate(ClassicalState.point(N4, "3"), m)
    assert d["odd"] == 1 and d["even"] == 0


def test_uniform_parity():
    m = ClassicalMeasurement.from_function(N4, lambda x: int(x) % 2)
    d = classical_evaluate(ClassicalState.uniform(N4), m)
    assert d[0] == F(1, 2) and d[1] == F(1, 2)


def test_signed_state_can_give_a_distribution():
    X = obj(["p", "q", "r"])
    s = ClassicalState(X, [F(1, 2), F(-1, 4), F(3, 4)], signed=True)
    d = classical_evaluate(s, ClassicalMeasurement(X, ["u", "u", "v"]))
    assert d["u"] == F(1, 4) and d["v"] == F(3, 4)


def test_states_validate():
    with pytest.raises(StochError):
        ClassicalState(N4, [F(1, 2)] * 4)
    with pytest.raises(StochError):
        ClassicalState(obj(2), [F(3, 2), F(-1, 2)])
    ClassicalState(obj(2), [F(3, 2), F(-1, 2)], signed=True)


def test_pushforward_examples():
    s = ClassicalState.uniform(obj(2))
    assert classical_pushforward(lambda x: x, s, obj(2)) == s
    star = obj(["*"])
    assert classical_pushforward(lambda x: "*", s, star) == ClassicalState.point(star, "*")


def test_chu_condition_on_random_triples():
    rng = random.Random(4)
    for _ in range(200):
        X, Y = obj(rng.randint(1, 5)), obj(rng.randint(1, 4))
        fmap = {x: rng.choice(Y.labels) for x in X}
        w = [F(rng.randint(0, 5)) for _ in X]
        w[0] += 1
        s = ClassicalState(X, [v / sum(w) for v in w])
        m = ClassicalMeasurement(Y, [rng.choice("abc") for _ in Y])
        assert (classical_evaluate(classical_pushforward(fmap, s, Y), m)
                == classical_evaluate(s, pullback_measurement(fmap, X, m)))


@pytest.mark.parametrize("settings,outcomes,size", [
    ([("a", "a'"), ("b", "b'")], ["0", "1"], 16),
    ([("a", "a'"), ("b", "b'"), ("c", "c'")], ["0", "1"], 64),
    ([("m",)], ["0", "1", "2", "3", "4"], 5),
])
def test_global_encoding_size(settings, outcomes, size):
    assert len(global_encoding(settings, outcomes)) == size


def test_global_encoding_slot_order():
    enc = global_encoding([("a", "a'"), ("b", "b'")], ["0", "1"])
    assert enc.slots == ((0, "a"), (1, "b"), (0, "a'"), (1, "b'"))
    assert enc.assignments[1] == ("0", "0", "0", "1")
    hat = enc.hat(("a'", "b"))
    assert hat(enc.obj.labels[0b0110]) == ("1", "1")


def test_global_encoding_rejects_empty():
    with pytest.raises(StochError):
        global_encoding([(), ("b",)], ["0"])
    with pytest.raises(StochError):
        global_encoding([("a",)], [])


def test_one_point_set_is_terminal_not_initial():
    star = obj(["*"])
    for n in (1, 2, 3):
        X = obj(n)
        # every row into a single column must be (1): exactly one map X -> *
        only = StochMor(X, star, [[1]] * n)
        assert all(r == (1,) for r in only.rows)
        if n >= 2:
            maps = {StochMor(star, X, [[int(i == k) for i in range(n)]]).rows for k in range(n)}
            maps.add(StochMor(star, X, [[F(1, n)] * n]).rows)
            assert len(maps) >= 2


def test_stochastic_rows_validated():
    with pytest.raises(StochError):
        StochMor(obj(1), obj(2), [[F(1, 2), F(1, 3)]])
    with pytest.raises(StochError):
        StochMor(obj(1), obj(2), [[F(3, 2), F(-1, 2)]])


def test_deterministic_maps_are_zero_one():
    f = deterministic({"0": "1", "1": "1"}, obj(2), obj(2))
    assert f.rows == ((0, 1), (0, 1))
    assert identity_stoch(obj(2)).then(f) == f


def _rows(draw, n, m, signed):
    rows = []
    for _ in range(n):
        vals = draw(st.lists(st.integers(-4 if signed else 0, 6), min_size=m, max_size=m))
        total = sum(vals)
        if total == 0:
            vals[0] += 1
            total = 1
        rows.append([F(v, total) for v in vals])
    return rows


@st.composite
def chains(draw, signed):
    a, b, c = (draw(st.integers(1, 4)) for _ in range(3))
    return (StochMor(obj(a), obj(b), _rows(draw, a, b, signed), signed),
            StochMor(obj(b), obj(c), _rows(draw, b, c, signed), signed))


@settings(max_examples=200, deadline=None)
@given(chains(signed=False))
def test_stochastic_composition_closes(pair):
    f, g = pair
    h = f.then(g)
    assert all(v >= 0 for r in h.rows for v in r)
    assert all(sum(r) == 1 for r in h.rows)


@settings(max_examples=200, deadline=None)
@given(chains(signed=True))
def test_signed_composition_keeps_row_sums(pair):
    f, g = pair
    h = f.then(g)
    assert all(sum(r) == 1 for r in h.rows)


def test_composition_is_associative_and_applies():
    rng = random.Random(9)
    X, Y, Z = obj(2), obj(3), obj(2)

    def rand(A, B):
        rows = []
        for _ in A:
            w = [F(rng.randint(0, 4)) for _ in B]
            w[0] += 1
            rows.append([v / sum(w) for v in w])
        return StochMor(A, B, rows)

    f, g, h = rand(X, Y), rand(Y, Z), rand(Z, X)
    assert f.then(g).then(h) == f.then(g.then(h))
    s = ClassicalState.uniform(X)
    assert f.then(g).apply(s) == g.apply(f.apply(s))
    assert identity_stoch(X).then(f) == f == f.then(identity_stoch(Y))
