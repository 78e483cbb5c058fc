import json
import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from infgeom.errors import OutsideChart, Singular, UnsupportedOrder
from infgeom.glinf import (
    GLInfAlgebra,
    GLInfElement,
    act,
    bch,
    bracket,
    compose,
    det,
    exp,
    identity,
    in_o,
    in_oalg,
    in_sl,
    in_slalg,
    in_so,
    invert,
    log_near_id,
    transitive_witness,
    trim,
    unit_matrix,
)
from infgeom.sampling import random_algebra, random_gl, random_orthogonal
from infgeom.seqspace import FinSeq, e, weak_inner, weak_norm

E = unit_matrix


def rotation_generator(theta: float) -> GLInfAlgebra:
    return theta * (E(1, 2) - E(2, 1))


def test_canonical_blocks():
    A = GLInfElement(np.diag([2.0, 1.0, 1.0]))
    assert A.n == 1
    assert GLInfElement(np.eye(4)) == identity()
    X = GLInfAlgebra(np.diag([0.0, 3.0, 0.0]))
    assert X.n == 2
    with pytest.raises(Singular):
        GLInfElement(np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_compose_invert_bracket_examples(rng):
    A = GLInfElement(random_gl(rng, 4))
    assert compose(A, invert(A)).distance(identity()) <= 1e-10
    X = GLInfAlgebra(rng.normal(size=(3, 3)))
    assert bracket(X, X) == GLInfAlgebra(np.zeros((0, 0)))
    assert bracket(E(1, 2), E(2, 1)) == E(1, 1) - E(2, 2)


def test_compose_pads_blocks():
    A = GLInfElement(np.array([[2.0]]))
    B = GLInfElement(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]]))
    np.testing.assert_array_equal(compose(A, B).padded(3), np.diag([2.0, 1.0, 1.0]) @ B.padded(3))


def test_exp_examples():
    t = 0.7
    assert exp(t * E(1, 2)).padded(2).tolist() == [[1.0, t], [0.0, 1.0]]
    th = 1.3
    R = exp(rotation_generator(th)).padded(2)
    np.testing.assert_allclose(R, [[math.cos(th), math.sin(th)], [-math.sin(th), math.cos(th)]], atol=1e-10)
    D = exp(GLInfAlgebra(np.diag([0.4, -1.1])))
    np.testing.assert_allclose(D.padded(2), np.diag([math.exp(0.4), math.exp(-1.1)]), rtol=1e-14)
    assert exp(GLInfAlgebra(np.zeros((3, 3)))) == identity()


def test_exp_matches_scipy(rng):
    for _ in range(100):
        n = int(rng.integers(1, 9))
        X = random_algebra(rng, n, rng.uniform(0, 5))
        np.testing.assert_allclose(exp(X).padded(n), scipy.linalg.expm(X.padded(n)), rtol=1e-12, atol=1e-12)


def test_log_examples(rng):
    assert log_near_id(identity()) == GLInfAlgebra(np.zeros((0, 0)))
    for _ in range(50):
        X = random_algebra(rng, int(rng.integers(1, 9)), rng.uniform(0, 0.5))
        assert (log_near_id(exp(X)) - X).max_abs() <= 1e-8
    with pytest.raises(OutsideChart):
        log_near_id(GLInfElement(np.diag([-1.0, 1.0])))


def test_log_matches_scipy(rng):
    for _ in range(50):
        n = int(rng.integers(1, 7))
        A = GLInfElement(np.eye(n) + random_algebra(rng, n, 0.8).block)
        np.testing.assert_allclose(log_near_id(A).padded(n), scipy.linalg.logm(A.padded(n)).real, atol=1e-12)


def test_exp_inductive_limit(rng):
    for _ in range(50):
        X = random_algebra(rng, 3, 2.0)
        big = GLInfAlgebra(X.padded(7))
        assert big == X
        assert np.array_equal(exp(big).padded(7), exp(X).padded(7))


def test_bch_examples(rng):
    X, Y = GLInfAlgebra(np.diag([0.3, -0.2])), GLInfAlgebra(np.diag([1.0, 0.5, 2.0]))
    for order in (1, 2, 3, 4):
        assert bch(X, Y, order) == X + Y
    s = 0.1
    expected = s * E(1, 2) + s * E(2, 1) + (s * s / 2) * (E(1, 1) - E(2, 2))
    assert (bch(s * E(1, 2), s * E(2, 1), 2) - expected).max_abs() <= 1e-17
    with pytest.raises(UnsupportedOrder):
        bch(X, Y, 5)


def test_bch_scaling_slopes(rng):
    eps = np.array([0.1, 0.05, 0.025])
    X, Y = random_algebra(rng, 4, 1.0), random_algebra(rng, 4, 1.0)
    for order in (1, 2, 3, 4):
        res = []
        for s in eps:
            Z = GLInfAlgebra(scipy.linalg.logm(scipy.linalg.expm(s * X.block) @ scipy.linalg.expm(s * Y.block)).real)
            res.append((Z - bch(s * X, s * Y, order)).max_abs())
        slope = np.polyfit(np.log(eps), np.log(res), 1)[0]
        assert abs(slope - (order + 1)) <= 0.3


def test_det_examples(rng):
    assert det(identity()) == 1.0
    assert det(GLInfElement(np.diag([2.0, 3.0]))) == pytest.approx(6.0, rel=1e-15)
    for _ in range(50):
        X = random_algebra(rng, int(rng.integers(1, 9)), 2.0)
        assert det(exp(X)) == pytest.approx(math.exp(X.trace()), rel=1e-8)


def test_det_homomorphism(rng):
    for _ in range(100):
        A = GLInfElement(random_gl(rng, int(rng.integers(1, 9))))
        B = GLInfElement(random_gl(rng, int(rng.integers(1, 9))))
        assert det(compose(A, B)) == pytest.approx(det(A) * det(B), rel=1e-8)


def test_act_examples(rng):
    x = FinSeq([1.0, -2.0, 3.0])
    assert act(identity(), x) == x
    th = 0.4
    out = act(exp(rotation_generator(th)), e(1))
    assert out.isclose(FinSeq([math.cos(th), -math.sin(th)]), 1e-10)
    A = GLInfElement(np.array([[2.0]]))
    assert act(A, FinSeq([1.0, 5.0])) == FinSeq([2.0, 5.0])
    for _ in range(50):
        A, B = GLInfElement(random_gl(rng, 4)), GLInfElement(random_gl(rng, 6))
        y = FinSeq(rng.normal(size=5))
        assert act(compose(A, B), y).isclose(act(A, act(B, y)), 1e-10)


def test_transitivity_witness(rng):
    for _ in range(200):
        x = FinSeq(rng.normal(size=int(rng.integers(1, 6))))
        y = FinSeq(rng.normal(size=int(rng.integers(1, 6))))
        if x.active_len == 0 or y.active_len == 0:
            continue
        A = transitive_witness(x, y)
        assert act(A, x).isclose(y, 1e-10 * max(1.0, weak_norm(y)))
    A = transitive_witness(e(3), e(1))
    assert act(A, e(3)).isclose(e(1), 1e-15)
    with pytest.raises(ValueError):
        transitive_witness(FinSeq(), e(1))


def test_membership_examples():
    X = E(1, 2) - E(2, 1)
    assert in_oalg(X) and in_so(exp(X))
    Y = E(1, 1) - E(2, 2)
    assert in_slalg(Y) and in_sl(exp(Y))
    R = GLInfElement(np.diag([-1.0, 1.0]))
    assert in_o(R) and not in_so(R)
    assert not in_oalg(E(1, 2)) and not in_slalg(E(1, 1))


def test_bracket_closure(rng):
    for _ in range(50):
        S, T = rng.normal(size=(2, 5, 5))
        assert in_oalg(bracket(GLInfAlgebra(S - S.T), GLInfAlgebra(T - T.T)))
        assert in_slalg(bracket(GLInfAlgebra(S), GLInfAlgebra(T)), 1e-12 * 50)


def test_one_parameter_subgroup(rng):
    for _ in range(100):
        X = random_algebra(rng, int(rng.integers(1, 9)), rng.uniform(0, 1))
        s, t = rng.uniform(-1, 1, size=2)
        assert exp((s + t) * X).distance(compose(exp(s * X), exp(t * X))) <= 1e-9


def test_isometry_action(rng):
    for _ in range(200):
        A = GLInfElement(random_orthogonal(rng, int(rng.integers(1, 9))))
        assert in_o(A)
        x, y = FinSeq(rng.normal(size=10)), FinSeq(rng.normal(size=7))
        assert abs(weak_inner(act(A, x), act(A, y)) - weak_inner(x, y)) <= 1e-9


def test_trim():
    A = GLInfElement(np.array([[1.0, 1e-14], [0.0, 1.0 + 1e-15]]))
    assert A.n == 2 and trim(A, 1e-12) == identity()
    assert trim(GLInfAlgebra(np.array([[1e-13]])), 1e-12).n == 0


def test_serialization(rng):
    A = GLInfElement(random_gl(rng, 3))
    data = json.loads(json.dumps(A.to_dict()))
    assert data["n"] == 3 and GLInfElement.from_dict(data) == A
    X = random_algebra(rng, 3, 1.0)
    assert GLInfAlgebra.from_dict(json.loads(json.dumps(X.to_dict()))) == X


@given(st.integers(0, 2**32 - 1))
def test_exp_log_roundtrip_property(seed):
    rng = np.random.default_rng(seed)
    X = random_algebra(rng, int(rng.integers(1, 9)), rng.uniform(0, 0.5))
    A = exp(X)
    assert (log_near_id(A) - X).max_abs() <= 1e-8
    assert exp(log_near_id(A)).distance(A) <= 1e-8


def test_exp_of_large_element_is_invertible():
    # large entries with a small determinant are still far from rank loss
    X = GLInfAlgebra(np.array([[-6.0, 40.0, 0.0], [0.0, -6.0, 30.0], [0.0, 0.0, -6.0]]))
    A = exp(X)
    assert abs(det(A) / math.exp(-18.0) - 1) <= 1e-8
