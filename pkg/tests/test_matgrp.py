"""Matrix kernels: commutators, powering, exp/log, depth, generators."""

import random

import pytest
from hypothesis import given, strategies as st

from tamelab.errors import DepthError, NonUnitDeterminant, PrecisionMismatch
from tamelab.matgrp import (
    RingMatrix,
    commutator,
    congruence_depth,
    int_power,
    mat_exp,
    mat_log,
    sl_standard_generators,
    zp_power,
)
from tamelab.padic import PadicScalar, ScalarRing, SeriesRing, pexp


def ident(ring, m=2):
    return RingMatrix.identity(ring, m)


def random_products(gens, count, seed=0):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        g = gens[rng.randrange(len(gens))]
        for _ in range(rng.randint(1, 4)):
            g = g * gens[rng.randrange(len(gens))]
        out.append(g)
    return out


# ---------------------------------------------------------------------------
# determinants and inverses


def test_det_of_unipotent_is_one():
    ring = ScalarRing(5, 4)
    x = RingMatrix.from_int_rows(ring, [[1, 5], [0, 1]])
    assert x.det() == ring.one()


def test_inverse_identity():
    ring = ScalarRing(3, 3)
    assert ident(ring).inverse() == ident(ring)


def test_inverse_of_generator_products():
    gens = sl_standard_generators(2, 3, 4)
    ring = gens[0].ring
    for g in random_products(gens, 100, seed=1):
        assert g * g.inverse() == ident(ring)


def test_inverse_nonunit_det():
    ring = ScalarRing(3, 3)
    g = RingMatrix.from_int_rows(ring, [[3, 0], [0, 3]])
    with pytest.raises(NonUnitDeterminant):
        g.inverse()


def test_gauss_jordan_path_matches_adjugate():
    # 5x5 forces the elimination path; check against defining property
    ring = ScalarRing(3, 3)
    rng = random.Random(2)
    rows = [
        [1 if i == j else 3 * rng.randrange(9) for j in range(5)] for i in range(5)
    ]
    g = RingMatrix.from_int_rows(ring, rows)
    assert g * g.inverse() == RingMatrix.identity(ring, 5)


def test_mixed_ring_rejected():
    a = ident(ScalarRing(3, 3))
    b = ident(ScalarRing(3, 4))
    with pytest.raises(PrecisionMismatch):
        a * b


# ---------------------------------------------------------------------------
# commutators


def test_commutator_self_trivial():
    gens = sl_standard_generators(2, 5, 4)
    for g in gens:
        assert commutator(g, g) == ident(g.ring)


def test_commutator_inverse_swap():
    gens = sl_standard_generators(2, 3, 4)
    for g, h in zip(random_products(gens, 20, 3), random_products(gens, 20, 4)):
        assert commutator(g, h).inverse() == commutator(h, g)


depth_one = st.tuples(
    st.sampled_from([3, 5]), *(st.integers(0, 5**3 - 1) for _ in range(4))
)


def _depth_one_matrix(params):
    p, a, b, c, d = params
    ring = ScalarRing(p, 4)
    return RingMatrix.from_int_rows(
        ring, [[1 + p * a, p * b], [p * c, 1 + p * d]]
    )


@given(depth_one, st.integers(0, 5**3 - 1), st.integers(0, 5**3 - 1))
def test_commutator_swap_property(params, e1, e2):
    g = _depth_one_matrix(params)
    h = _depth_one_matrix((params[0], e1, e2, params[3], params[1]))
    assert commutator(g, h).inverse() == commutator(h, g)


@given(depth_one)
def test_power_depth_property(params):
    g = _depth_one_matrix(params)
    d = congruence_depth(g)
    assert congruence_depth(int_power(g, params[0])) >= min(d + 1, 4)


def test_diagonal_conjugation_relation():
    # [s, x] = x^(q-1) for s = diag(alpha, alpha^-1), alpha^2 = q
    from tamelab.padic import hensel_sqrt

    p, prec, q = 5, 4, 1 + 5**2
    ring = ScalarRing(p, prec)
    alpha = hensel_sqrt(ring.from_int(q))
    s = RingMatrix(ring, [[alpha, ring.zero()], [ring.zero(), alpha.inv()]])
    x = RingMatrix.from_int_rows(ring, [[1, p], [0, 1]])
    assert commutator(s, x) == int_power(x, q - 1)


# ---------------------------------------------------------------------------
# powering


def test_zp_power_zero_and_one():
    gens = sl_standard_generators(2, 7, 4)
    g = gens[0]
    assert zp_power(g, PadicScalar(7, 4, 0)) == ident(g.ring)
    assert zp_power(g, PadicScalar(7, 4, 1)) == g


def test_zp_power_additivity_against_direct_powering():
    rng = random.Random(9)
    p, prec = 5, 4
    ring = ScalarRing(p, prec)
    x = RingMatrix.from_int_rows(ring, [[1, p], [0, 1]])
    for _ in range(25):
        a = rng.randrange(p**prec)
        b = rng.randrange(p**prec)
        lhs = zp_power(x, PadicScalar(p, prec, a)) * zp_power(x, PadicScalar(p, prec, b))
        rhs = int_power(x, (a % p ** (prec - 1)) + (b % p ** (prec - 1)))
        assert lhs == rhs
        assert lhs == zp_power(x, PadicScalar(p, prec, a + b))


def test_zp_power_depends_on_window_only():
    p, prec = 3, 4
    ring = ScalarRing(p, prec)
    g = RingMatrix.from_int_rows(ring, [[1, 3], [3, 1 + 3 * 3]])
    assert congruence_depth(g) >= 1
    a = PadicScalar(p, prec, 5)
    b = PadicScalar(p, prec, 5 + p ** (prec - 1))
    assert zp_power(g, a) == zp_power(g, b)


def test_zp_power_needs_depth():
    ring = ScalarRing(3, 3)
    g = RingMatrix.from_int_rows(ring, [[2, 0], [0, 14]])
    with pytest.raises(DepthError):
        zp_power(g, PadicScalar(3, 3, 1))


# ---------------------------------------------------------------------------
# exp / log


def test_mat_exp_zero():
    ring = ScalarRing(3, 4)
    assert mat_exp(RingMatrix.zeros(ring, 2)) == ident(ring)


def test_mat_log_exp_roundtrip():
    ring = ScalarRing(3, 4)
    x = RingMatrix.from_int_rows(ring, [[0, 3], [0, 0]])
    assert mat_log(mat_exp(x)) == x
    rng = random.Random(5)
    for p, prec in [(3, 5), (5, 4), (7, 3)]:
        ring = ScalarRing(p, prec)
        for _ in range(10):
            x = RingMatrix.from_int_rows(
                ring, [[p * rng.randrange(p**prec) for _ in range(2)] for _ in range(2)]
            )
            assert mat_log(mat_exp(x)) == x


def test_mat_exp_det_is_exp_trace():
    rng = random.Random(6)
    ring = ScalarRing(5, 4)
    for _ in range(10):
        x = RingMatrix.from_int_rows(
            ring, [[5 * rng.randrange(125) for _ in range(3)] for _ in range(3)]
        )
        assert mat_exp(x).det() == pexp(x.trace())


def test_mat_exp_additive_on_commuting_pairs():
    ring = ScalarRing(3, 4)
    x = RingMatrix.from_int_rows(ring, [[3, 6], [9, 3]])
    for y in (x, x * x, RingMatrix.from_int_rows(ring, [[3, 0], [0, 3]])):
        assert x * y == y * x
        assert mat_exp(x) * mat_exp(y) == mat_exp(x + y)


def test_quaternion_generator_lands_in_kernel():
    # x = exp(pA) for the 4x4 quaternion A at p=5, a=2: det 1 and depth >= 1
    from tamelab.certify import quaternion_matrices

    ring = ScalarRing(5, 4)
    a_mat = quaternion_matrices(ring, 2)["A"]
    x = mat_exp(a_mat.scale(ring.from_int(5)))
    assert x.det() == ring.one()
    assert congruence_depth(x) >= 1


def test_mat_exp_needs_divisibility():
    ring = ScalarRing(3, 3)
    with pytest.raises(DepthError):
        mat_exp(RingMatrix.from_int_rows(ring, [[0, 1], [0, 0]]))
    with pytest.raises(DepthError):
        mat_log(RingMatrix.from_int_rows(ring, [[1, 1], [0, 1]]))


# ---------------------------------------------------------------------------
# standard generators


def test_sl2_generators_traces_and_count():
    gens = sl_standard_generators(2, 3, 4)
    assert len(gens) == 3
    for g in gens:
        assert mat_log(g).trace().value == 0
        assert g.det() == g.ring.one()


@pytest.mark.parametrize("m", [2, 3, 4])
def test_sl_generator_count(m):
    gens = sl_standard_generators(m, 3, 3)
    assert len(gens) == m * m - 1


def test_sl_generators_depth_exactly_one():
    for m in (2, 3):
        for g in sl_standard_generators(m, 5, 4):
            assert congruence_depth(g) == 1


# ---------------------------------------------------------------------------
# congruence depth


def test_depth_of_identity_is_cap():
    ring = ScalarRing(3, 4)
    assert congruence_depth(ident(ring)) == 4


def test_depth_of_unipotent():
    ring = ScalarRing(5, 4)
    assert congruence_depth(RingMatrix.from_int_rows(ring, [[1, 5], [0, 1]])) == 1


def test_powering_raises_depth():
    # the engine behind the powering isomorphism between graded layers
    for p in (3, 5, 7):
        gens = sl_standard_generators(2, p, 4)
        for g in gens + random_products(gens, 10, seed=p):
            d = congruence_depth(g)
            if d >= 1:
                assert congruence_depth(int_power(g, p)) >= d + 1


def test_depth_of_product_bound():
    gens = sl_standard_generators(2, 3, 4)
    for g, h in zip(random_products(gens, 15, 7), random_products(gens, 15, 8)):
        assert congruence_depth(g * h) >= min(congruence_depth(g), congruence_depth(h))


# ---------------------------------------------------------------------------
# series-ring variants


def test_series_ring_matrix_operations():
    ring = SeriesRing(3, 1, 4)
    t = ring.variable(0)
    p_elt = ring.from_int(3)
    g = RingMatrix(
        ring,
        [[ring.one(), p_elt * t + t * t], [ring.zero(), ring.one()]],
    )
    h = RingMatrix(ring, [[ring.one(), ring.zero()], [t, ring.one()]])
    assert congruence_depth(g) == 2
    assert congruence_depth(h) == 1
    assert commutator(g, h).inverse() == commutator(h, g)
    assert congruence_depth(int_power(h, 3)) >= 2


def test_series_ring_exp_log_roundtrip():
    ring = SeriesRing(3, 1, 4)
    t = ring.variable(0)
    p_elt = ring.from_int(3)
    x = RingMatrix(
        ring,
        [[p_elt, p_elt * t], [ring.zero(), -p_elt]],
    )
    g = mat_exp(x)
    assert mat_log(g) == x
    assert congruence_depth(g) >= 1


def test_series_matrix_json_roundtrip():
    ring = SeriesRing(3, 1, 3)
    g = RingMatrix(
        ring,
        [[ring.one(), ring.variable(0)], [ring.from_int(3), ring.one()]],
    )
    assert RingMatrix.from_json(g.to_json()) == g


def test_scalar_matrix_json_roundtrip():
    ring = ScalarRing(7, 3)
    g = RingMatrix.from_int_rows(ring, [[1, 7], [14, 8]])
    assert RingMatrix.from_json(g.to_json()) == g
