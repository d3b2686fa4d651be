"""Tests for the L-BFGS buffer, in standard and masked mode."""
import numpy as np
import pytest

from panoctools.lib.lbfgs import LbfgsBuffer


def conjugate_pairs(Q, rng):
    """Return n pairs (s, Q s) with Q-conjugate steps s."""
    n = Q.shape[0]
    steps = []
    for v in rng.standard_normal((n, n)):
        for s in steps:
            v = v - v.dot(Q).dot(s) / s.dot(Q).dot(s) * s
        steps.append(v)
    return [(s, Q.dot(s)) for s in steps]


def random_spd(rng, n):
    M = rng.standard_normal((n, n))
    return M.T.dot(M) + n * np.eye(n)


def dense_bfgs_inverse(pairs, n):
    """Dense inverse BFGS update with the scaled initial matrix of the last pair."""
    s, y = pairs[-1]
    H = s.dot(y) / y.dot(y) * np.eye(n)
    for s, y in pairs:
        rho = 1 / y.dot(s)
        V = np.eye(n) - rho * np.outer(y, s)
        H = V.T.dot(H).dot(V) + rho * np.outer(s, s)
    return H


class TestPush:
    def test_accepts_positive_curvature(self):
        buffer = LbfgsBuffer(2)
        assert buffer.push(np.array([1., 0.]), np.array([1., 0.]))
        assert buffer.count == 1

    def test_rejects_negative_curvature(self):
        buffer = LbfgsBuffer(2)
        assert not buffer.push(np.array([1., 0.]), np.array([-1., 0.]))
        assert buffer.count == 0

    def test_masked_mode_stores_negative_curvature(self):
        buffer = LbfgsBuffer(2, masked=True)
        assert buffer.push(np.array([1., 0.]), np.array([-1., 0.]))
        assert buffer.count == 1

    def test_rejects_nonfinite_pair(self):
        buffer = LbfgsBuffer(2, masked=True)
        assert not buffer.push(np.array([np.nan, 0.]), np.array([1., 0.]))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            LbfgsBuffer(2).push(np.zeros(3), np.zeros(3))

    def test_memory_is_bounded(self):
        buffer = LbfgsBuffer(1, memory=3)
        for i in range(1, 6):
            buffer.push(np.array([1.]), np.array([float(i)]))
        assert buffer.count == 3
        # Newest pair first.
        assert [buffer.y[slot][0] for slot in buffer.slots()] == [5., 4., 3.]

    def test_invalid_memory(self):
        with pytest.raises(ValueError):
            LbfgsBuffer(2, memory=0)


class TestApply:
    def test_empty_buffer_is_identity(self):
        np.testing.assert_array_equal(LbfgsBuffer(2).apply(np.array([3., -1.])), [3., -1.])

    def test_single_pair(self):
        buffer = LbfgsBuffer(2)
        buffer.push(np.array([1., 0.]), np.array([1., 0.]))
        np.testing.assert_allclose(buffer.apply(np.array([1., 0.])), [1., 0.])

    def test_does_not_modify_argument(self):
        buffer = LbfgsBuffer(2)
        buffer.push(np.array([1., 0.]), np.array([2., 0.]))
        v = np.array([1., 1.])
        buffer.apply(v)
        np.testing.assert_array_equal(v, [1., 1.])

    def test_newton_step_on_diagonal_quadratic(self):
        Q = np.diag([1., 4.])
        buffer = LbfgsBuffer(2)
        for s in (np.array([1., 0.]), np.array([0., 1.])):
            buffer.push(s, Q.dot(s))
        x = np.array([0.3, -2.])
        v = Q.dot(x)
        np.testing.assert_allclose(buffer.apply(v), x, atol=1e-10)

    @pytest.mark.parametrize("seed", range(3))
    def test_exact_inverse_on_quadratic(self, seed):
        rng = np.random.default_rng(seed)
        n = 5
        Q = random_spd(rng, n)
        buffer = LbfgsBuffer(n, memory=n)
        for s, y in conjugate_pairs(Q, rng):
            assert buffer.push(s, y)
        v = rng.standard_normal(n)
        np.testing.assert_allclose(buffer.apply(v), np.linalg.solve(Q, v), rtol=1e-8)

    def test_matches_dense_bfgs(self):
        rng = np.random.default_rng(7)
        n = 4
        Q = random_spd(rng, n)
        pairs = [(s, Q.dot(s)) for s in rng.standard_normal((3, n))]
        buffer = LbfgsBuffer(n)
        for s, y in pairs:
            buffer.push(s, y)
        v = rng.standard_normal(n)
        np.testing.assert_allclose(buffer.apply(v), dense_bfgs_inverse(pairs, n).dot(v),
                                   rtol=1e-8)


class TestApplyMasked:
    def test_full_mask_equals_apply(self):
        rng = np.random.default_rng(8)
        buffer = LbfgsBuffer(3, masked=True)
        Q = random_spd(rng, 3)
        for s in rng.standard_normal((3, 3)):
            buffer.push(s, Q.dot(s))
        v = rng.standard_normal(3)
        np.testing.assert_array_equal(buffer.apply_masked(v, np.arange(3)), buffer.apply(v))

    def test_negative_restricted_curvature_is_skipped(self):
        buffer = LbfgsBuffer(2, masked=True)
        buffer.push(np.array([1., 1.]), np.array([-1., 5.]))
        np.testing.assert_array_equal(buffer.apply_masked(np.array([2.]), np.array([0])), [2.])
        # The other coordinate has positive curvature 5, and 1-D BFGS scales by s/y.
        np.testing.assert_allclose(buffer.apply_masked(np.array([2.]), np.array([1])), [0.4])

    def test_restricted_pair(self):
        buffer = LbfgsBuffer(2, masked=True)
        buffer.push(np.array([1., 2.]), np.array([1., 8.]))
        np.testing.assert_allclose(buffer.apply_masked(np.array([1.]), np.array([0])), [1.])

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_dense_bfgs_on_mask(self, seed):
        rng = np.random.default_rng(100 + seed)
        n = 5
        Q = random_spd(rng, n)
        mask = np.sort(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False))
        pairs = [(s, Q.dot(s)) for s in rng.standard_normal((5, n))]
        buffer = LbfgsBuffer(n, masked=True)
        for s, y in pairs:
            buffer.push(s, y)
        restricted = [(s[mask], y[mask]) for s, y in pairs]
        restricted = [(s, y) for s, y in restricted if y.dot(s) > 1e-12 * s.dot(s)]
        v = rng.standard_normal(mask.shape[0])
        expected = dense_bfgs_inverse(restricted, mask.shape[0]).dot(v) if restricted else v
        np.testing.assert_allclose(buffer.apply_masked(v, mask), expected, rtol=1e-8)

    def test_wrong_length(self):
        buffer = LbfgsBuffer(3, masked=True)
        with pytest.raises(ValueError):
            buffer.apply_masked(np.zeros(3), np.array([0, 1]))


class TestReset:
    def test_reset_gives_identity(self):
        buffer = LbfgsBuffer(2)
        buffer.push(np.array([1., 0.]), np.array([3., 0.]))
        buffer.reset()
        buffer.reset()
        assert buffer.count == 0
        np.testing.assert_array_equal(buffer.apply(np.array([1., 2.])), [1., 2.])

    def test_push_after_reset(self):
        buffer = LbfgsBuffer(1)
        buffer.push(np.array([1.]), np.array([3.]))
        buffer.reset()
        buffer.push(np.array([1.]), np.array([2.]))
        np.testing.assert_allclose(buffer.apply(np.array([1.])), [0.5])
