"""Curvature engine: connection and tensor identities, Einstein checks, I1.

The decisive correctness property is at the bottom: for random positive
metric constants, the per-class Ricci eigenvalues computed by the engine
coincide with the closed-form equation systems of both ansatz families.
"""

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import su_einstein as se
from su_einstein.curvature import lower_riemann, ricci_fast
from conftest import sc_for

SQ2 = np.sqrt(2.0)


def metric(scheme, n, p, x):
    return se.MetricSpec.from_x(sc_for(scheme, n, p), x)


def random_x(rng, k):
    return tuple(np.exp(rng.uniform(-1.2, 1.2, k)))


class TestMetricSpec:
    def test_rejects_nonpositive(self):
        sc = sc_for(1, 3)
        with pytest.raises(ValueError):
            se.MetricSpec.from_x(sc, (1.0, -1.0, 2.0))
        with pytest.raises(ValueError):
            se.MetricSpec.from_x(sc, (0.0, 1.0, 2.0))

    def test_rejects_wrong_arity(self):
        with pytest.raises(ValueError):
            se.MetricSpec.from_x(sc_for(1, 3), (1.0, 1.0, 1.0, 1.0))

    def test_frame_metric_positive(self, rng):
        m = metric(2, 5, 3, random_x(rng, 4))
        assert np.all(m.g > 0)
        assert m.g.shape == (24,)


class TestLeviCivita:
    @pytest.mark.parametrize("c", [1.0, 2.5])
    def test_biinvariant_gamma_is_half_f(self, c):
        sc = sc_for(1, 3)
        gamma = se.levi_civita(sc, metric(1, 3, None, (c, c, c)))
        npt.assert_allclose(gamma, sc.f / 2.0, atol=1e-13)

    def test_su2_unit_x_values(self):
        # frozen from evaluating the Koszul formula on the su(2) constants:
        # the two off-diagonal directions connect with +-sqrt(2)/2, the
        # diagonal one with +-sqrt(2)
        sc = sc_for(1, 2)
        gamma = se.levi_civita(sc, metric(1, 2, None, (1, 1, 1)))
        nonzero = {idx: gamma[idx] for idx in zip(*np.nonzero(np.abs(gamma) > 1e-14))}
        assert len(nonzero) == 6
        expected = {
            (0, 1, 2): -SQ2 / 2, (0, 2, 1): SQ2 / 2,
            (1, 0, 2): SQ2 / 2, (1, 2, 0): -SQ2 / 2,
            (2, 0, 1): -SQ2, (2, 1, 0): SQ2,
        }
        for idx, val in expected.items():
            assert nonzero[idx] == pytest.approx(val, rel=1e-14)

    def test_torsion_100_random_draws(self, rng):
        sc = sc_for(1, 3)
        for _ in range(100):
            m = metric(1, 3, None, random_x(rng, 3))
            gamma = se.levi_civita(sc, m)
            npt.assert_allclose(gamma - np.transpose(gamma, (0, 2, 1)), sc.f, atol=1e-10)

    @pytest.mark.parametrize("scheme,n,p", [(1, 3, None), (1, 5, None), (2, 4, 2), (2, 5, 3)])
    def test_metric_compatibility(self, scheme, n, p, rng):
        sc = sc_for(scheme, n, p)
        k = 3 if scheme == 1 else 4
        for _ in range(5):
            m = metric(scheme, n, p, random_x(rng, k))
            gamma = se.levi_civita(sc, m)
            # g(grad_a e_b, e_c) + g(e_b, grad_a e_c) = 0
            low = np.einsum("cab,c->abc", gamma, m.g)
            npt.assert_allclose(low + np.einsum("acb->abc", low), 0.0, atol=1e-10)

    def test_koszul_bilinear_identity(self, rng):
        # 2 g(grad_a b, c) = g([a,b],c) - g([b,c],a) + g([c,a],b)
        sc = sc_for(2, 4, 2)
        m = metric(2, 4, 2, random_x(rng, 4))
        gamma = se.levi_civita(sc, m)
        lhs = 2.0 * np.einsum("cab,c->abc", gamma, m.g)
        br = np.einsum("cab,c->abc", sc.f, m.g)
        rhs = br - np.einsum("bca->abc", br) + np.einsum("cab->abc", br)
        npt.assert_allclose(lhs, rhs, atol=1e-10)


class TestRiemann:
    @pytest.mark.parametrize("scheme,n,p", [(1, 3, None), (1, 4, None), (1, 5, None),
                                            (2, 4, 2), (2, 5, 3), (2, 5, 2)])
    def test_symmetries_and_bianchi(self, scheme, n, p, rng):
        sc = sc_for(scheme, n, p)
        k = 3 if scheme == 1 else 4
        for _ in range(25):
            m = metric(scheme, n, p, random_x(rng, k))
            gamma = se.levi_civita(sc, m)
            riem = se.riemann(gamma, sc)
            low = lower_riemann(riem, m)
            npt.assert_allclose(low, -np.transpose(low, (0, 1, 3, 2)), atol=1e-10)
            npt.assert_allclose(low, -np.transpose(low, (1, 0, 2, 3)), atol=1e-10)
            npt.assert_allclose(low, np.transpose(low, (2, 3, 0, 1)), atol=1e-10)
            bianchi = (low + np.transpose(low, (0, 2, 3, 1))
                       + np.transpose(low, (0, 3, 1, 2)))
            npt.assert_allclose(bianchi, 0.0, atol=1e-10)

    def test_su2_biinvariant_sectional_positive_scalar(self):
        sc = sc_for(1, 2)
        m = metric(1, 2, None, (1, 1, 1))
        bundle = se.curvature_bundle(sc, m)
        low = lower_riemann(bundle.riem, m)
        for a in range(3):
            for b in range(a + 1, 3):
                K = low[a, b, a, b] / (m.g[a] * m.g[b])
                assert K > 0
        assert bundle.scalar == pytest.approx(3 * 0.25, rel=1e-12)
        assert bundle.lambda_best == pytest.approx(0.25, rel=1e-12)

    def test_balance_block_self_curvature_vanishes(self):
        # the 1-dimensional trace-balance block is abelian; curvature with
        # all indices in it has nothing to act on
        sc = sc_for(2, 4, 2)
        m = metric(2, 4, 2, (1.3, 0.7, 1.0, 0.2))
        riem = se.riemann(se.levi_civita(sc, m), sc)
        u = int(np.nonzero(sc.class_of == 3)[0][0])
        assert riem[u, u, u, u] == 0.0

    def test_ricci_contraction_matches_fast_path(self, rng):
        sc = sc_for(2, 5, 3)
        m = metric(2, 5, 3, random_x(rng, 4))
        gamma = se.levi_civita(sc, m)
        ric_full = se.ricci(se.riemann(gamma, sc))
        npt.assert_allclose(ric_full, ricci_fast(gamma, sc), atol=1e-11)

    @pytest.mark.parametrize("scheme,n,p", [(1, 4, None), (2, 5, 2)])
    def test_ricci_symmetric_and_block_scalar(self, scheme, n, p, rng):
        sc = sc_for(scheme, n, p)
        k = 3 if scheme == 1 else 4
        for _ in range(10):
            m = metric(scheme, n, p, random_x(rng, k))
            ric = se.curvature_bundle(sc, m, with_riemann=False).ric
            npt.assert_allclose(ric, ric.T, atol=1e-11)
            # diagonal in the frame, constant over each class: this is what
            # reduces the Einstein condition to one equation per class
            npt.assert_allclose(ric - np.diag(np.diag(ric)), 0.0, atol=1e-10)
            sigma = np.diag(ric) / m.weights
            for c in range(sc.num_classes):
                vals = sigma[sc.class_of == c]
                assert np.ptp(vals) < 1e-10


class TestEinsteinResidual:
    @pytest.mark.parametrize("n", range(2, 7))
    def test_biinvariant_ricci_proportional_to_metric(self, n):
        sc = sc_for(1, n)
        m = metric(1, n, None, (1, 1, 1))
        bundle = se.curvature_bundle(sc, m, with_riemann=False)
        npt.assert_allclose(bundle.ric, (n / 8.0) * np.diag(m.g), atol=1e-10)

    def test_second_family_n4(self):
        residual, lam = se.einstein_residual(metric(1, 4, None, (7, 1, 7)), sc_for(1, 4))
        assert residual < 1e-10
        assert lam == pytest.approx(13 / 98, rel=1e-12)

    def test_second_family_n3(self):
        residual, lam = se.einstein_residual(metric(1, 3, None, (11, 1, 11)), sc_for(1, 3))
        assert residual < 1e-10
        assert lam == pytest.approx(63 / 968, rel=1e-12)

    def test_generic_point_not_einstein(self):
        residual, _ = se.einstein_residual(metric(1, 3, None, (1, 2, 1)), sc_for(1, 3))
        assert residual > 1e-3


class TestInvariantI1:
    def test_biinvariant_n5(self):
        assert se.invariant_I1(metric(1, 5, None, (1, 1, 1)), sc_for(1, 5)) \
            == pytest.approx(24.0, rel=1e-10)

    def test_second_family_values(self):
        assert se.invariant_I1(metric(1, 3, None, (11, 1, 11)), sc_for(1, 3)) \
            == pytest.approx(754 / 63, rel=1e-10)
        assert se.invariant_I1(metric(1, 4, None, (7, 1, 7)), sc_for(1, 4)) \
            == pytest.approx(276 / 13, rel=1e-10)

    def test_undefined_off_shell(self):
        with pytest.raises(ValueError, match="not Einstein"):
            se.invariant_I1(metric(1, 3, None, (1, 2, 1)), sc_for(1, 3))

    def test_riem_norm_scaling(self):
        sc = sc_for(1, 3)
        m = metric(1, 3, None, (1.0, 1.0, 1.0))
        m2 = m.scaled(2.0)
        r1 = se.riem_norm_sq(se.riemann(se.levi_civita(sc, m), sc), m)
        r2 = se.riem_norm_sq(se.riemann(se.levi_civita(sc, m2), sc), m2)
        assert r2 == pytest.approx(r1 / 4.0, rel=1e-12)

    @settings(max_examples=20, deadline=None)
    @given(c=st.floats(min_value=0.1, max_value=10.0, allow_nan=False))
    def test_scale_invariance(self, c):
        sc = sc_for(1, 3)
        m = metric(1, 3, None, (11, 1, 11))
        base = se.invariant_I1(m, sc)
        scaled = se.invariant_I1(m.scaled(c), sc)
        assert scaled == pytest.approx(base, rel=1e-9)


def scheme1_lhs(n, x1, x2, x3):
    return np.array([
        n / 4 - (n - 2) / 8 * x2 / x1 + 0.25 * x1**2 / (x2 * x3)
        - 0.25 * x3 / x2 - 0.25 * x2 / x3,
        (n + 6) / 16 + (n - 2) / 16 * x2**2 / x1**2 + 0.25 * x2**2 / (x1 * x3)
        - 0.25 * x3 / x1 - 0.25 * x1 / x3,
        n / 8 * (2 - x2 / x1 - x1 / x2 + x3**2 / (x1 * x2)),
    ])


def scheme2_lhs(n, p, x1, x2, x3, x4):
    q = n - p
    return np.array([
        p / 8 + q / 8 * x1**2 / x3**2,
        q / 8 + p / 8 * x2**2 / x3**2,
        (p + q) / 4 - (p - 1) * (p + 1) / (8 * p) * x1 / x3
        - (q - 1) * (q + 1) / (8 * q) * x2 / x3 - (p + q)**2 / 16 * x4 / x3,
        p * q * (p + q)**2 / 16 * x4**2 / x3**2,
    ])


class TestEngineMatchesEquationSystems:
    """Class Ricci eigenvalues == closed-form equation left-hand sides."""

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_scheme1(self, n, rng):
        sc = sc_for(1, n)
        for _ in range(10):
            x = random_x(rng, 3)
            sigma = se.class_ricci_eigenvalues(sc, metric(1, n, None, x))
            npt.assert_allclose(sigma, scheme1_lhs(n, *x), atol=1e-9)

    @pytest.mark.parametrize("n,p", [(4, 2), (5, 2), (5, 3), (6, 2)])
    def test_scheme2(self, n, p, rng):
        sc = sc_for(2, n, p)
        for _ in range(10):
            x = random_x(rng, 4)
            sigma = se.class_ricci_eigenvalues(sc, metric(2, n, p, x))
            npt.assert_allclose(sigma, scheme2_lhs(n, p, *x), atol=1e-9)

    def test_einstein_iff_sigma_equals_lambda_x(self):
        sc = sc_for(1, 4)
        m = metric(1, 4, None, (7, 1, 7))
        sigma = se.class_ricci_eigenvalues(sc, m)
        _, lam = se.einstein_residual(m, sc)
        npt.assert_allclose(sigma, lam * np.array(m.x), atol=1e-12)
