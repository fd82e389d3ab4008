"""Generator bases: construction, Gram data, structure-constant identities."""

import numpy as np
import numpy.testing as npt
import pytest

from su_einstein import (
    GeneratorBasis,
    build_scheme1_basis,
    build_scheme2_basis,
    exact_validate,
    structure_constants,
    validate_basis,
)
from conftest import sc_for

SQ2 = np.sqrt(2.0)


def diag_mix_reference(n):
    """Independent oracle: the diagonal-mix rows built directly from P and Q."""
    Q = np.zeros((n, n))
    for j in range(1, n):
        Q[j - 1, :j] = 1.0 / np.sqrt(j * (j + 1))
        Q[j - 1, j] = -j / np.sqrt(j * (j + 1))
    Q[n - 1, :] = 1.0 / np.sqrt(n)
    P = np.zeros((n, n))
    for i in range(n - 1):
        for j in range(n - 1):
            P[i, j] = 2.0 / (n - 1) - (1.0 if i == j else 0.0)
    P[n - 1, n - 1] = 1.0
    return P @ Q


class TestScheme1Basis:
    def test_su2_generators_explicit(self):
        basis = build_scheme1_basis(2)
        assert basis.dim == 3
        npt.assert_array_equal(basis.generators[0], np.array([[0, 1], [1, 0]], dtype=complex))
        npt.assert_array_equal(basis.generators[1], np.array([[0, 1j], [-1j, 0]], dtype=complex))
        # for n=2 the P block is the 1x1 identity, so the diagonal generator
        # is just the first Q row applied to (E_11, E_22)
        npt.assert_allclose(basis.generators[2], np.diag([1 / SQ2, -1 / SQ2]).astype(complex),
                            atol=1e-15)

    def test_su3_class_sizes(self):
        basis = build_scheme1_basis(3)
        assert basis.class_sizes() == (3, 3, 2)
        assert basis.dim == 8

    @pytest.mark.parametrize("n", range(2, 9))
    def test_dimension_and_class_sizes(self, n):
        basis = build_scheme1_basis(n)
        m = n * (n - 1) // 2
        assert basis.dim == n * n - 1
        assert basis.class_sizes() == (m, m, n - 1)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_diag_mix_rows_match_reference(self, n):
        basis = build_scheme1_basis(n)
        ref = diag_mix_reference(n)
        diag_gens = basis.generators[basis.class_of == 2]
        for j, gen in enumerate(diag_gens):
            npt.assert_allclose(np.diag(gen).real, ref[j], atol=1e-14)
            npt.assert_allclose(np.diag(gen).imag, 0.0, atol=1e-15)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_diag_mix_rows_orthonormal(self, n):
        rows = diag_mix_reference(n)[: n - 1]
        npt.assert_allclose(rows @ rows.T, np.eye(n - 1), atol=1e-13)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_diag_trace_norm_sums_to_n_minus_1(self, n):
        basis = build_scheme1_basis(n)
        diag_gram = basis.gram_diagonal()[basis.class_of == 2]
        npt.assert_allclose(diag_gram.sum(), n - 1, atol=1e-13)

    def test_rejects_n_below_2(self):
        with pytest.raises(ValueError):
            build_scheme1_basis(1)

    @pytest.mark.parametrize("n", range(2, 7))
    def test_hermitian_traceless(self, n):
        T = build_scheme1_basis(n).generators
        npt.assert_allclose(T, np.conj(np.transpose(T, (0, 2, 1))), atol=0)
        npt.assert_allclose(np.einsum("aii->a", T), 0.0, atol=1e-15)

    def test_su3_gram_diagonal(self):
        basis = build_scheme1_basis(3)
        npt.assert_allclose(basis.gram_diagonal(), [2, 2, 2, 2, 2, 2, 1, 1], atol=1e-14)


class TestScheme2Basis:
    def test_n4_p2_class_sizes(self):
        basis = build_scheme2_basis(4, 2)
        assert basis.class_sizes() == (3, 3, 8, 1)
        assert basis.dim == 15

    def test_n5_p3_class_sizes(self):
        basis = build_scheme2_basis(5, 3)
        assert basis.class_sizes() == (8, 3, 12, 1)
        assert basis.dim == 24

    def test_balance_generator_n4_p2(self):
        basis = build_scheme2_basis(4, 2)
        bal = basis.generators[basis.class_of == 3][0]
        npt.assert_array_equal(bal, np.diag([2, 2, -2, -2]).astype(complex))
        assert np.trace(bal) == 0
        assert np.real(np.trace(bal @ bal)) == 16

    def test_gram_balance_entry(self):
        basis = build_scheme2_basis(4, 2)
        gram = basis.gram_diagonal()
        assert gram[basis.class_of == 3][0] == pytest.approx(16.0, abs=1e-14)

    def test_degenerate_splits(self):
        # p = 1: the su(1) block has no generators; p = 0: only the other block
        assert build_scheme2_basis(5, 1).class_sizes() == (0, 15, 8, 1)
        assert build_scheme2_basis(5, 0).class_sizes() == (0, 24, 0, 0)
        assert build_scheme2_basis(5, 5).class_sizes() == (24, 0, 0, 0)

    def test_p_equal_n_matches_scheme1(self):
        b1 = build_scheme1_basis(4)
        b2 = build_scheme2_basis(4, 4)
        npt.assert_array_equal(b1.generators, b2.generators)
        f1 = structure_constants(b1).f
        f2 = structure_constants(b2).f
        npt.assert_allclose(f1, f2, atol=0)

    def test_rejects_bad_p(self):
        with pytest.raises(ValueError):
            build_scheme2_basis(4, 5)
        with pytest.raises(ValueError):
            build_scheme2_basis(4, -1)


class TestStructureConstants:
    def test_su2_values(self):
        sc = sc_for(1, 2)
        # the commutator of the two off-diagonal generators lies along the
        # diagonal one with coefficient of magnitude 2*sqrt(2)
        assert abs(sc.f[2, 0, 1]) == pytest.approx(2 * SQ2, rel=1e-15)
        assert abs(sc.f[0, 1, 2]) == pytest.approx(SQ2, rel=1e-15)
        assert abs(sc.f[1, 2, 0]) == pytest.approx(SQ2, rel=1e-15)

    @pytest.mark.parametrize("scheme,n,p", [(1, 2, None), (1, 4, None), (2, 5, 2)])
    def test_antisymmetry_and_diagonal_zero(self, scheme, n, p):
        sc = sc_for(scheme, n, p)
        npt.assert_allclose(sc.f, -np.transpose(sc.f, (0, 2, 1)), atol=0)
        npt.assert_allclose(np.einsum("caa->ca", sc.f), 0.0, atol=0)

    def test_su3_lowered_totally_antisymmetric(self):
        low = sc_for(1, 3).lowered()
        for perm, sign in ((( 1, 0, 2), -1), ((0, 2, 1), -1), ((2, 1, 0), -1),
                           ((1, 2, 0), 1), ((2, 0, 1), 1)):
            npt.assert_allclose(low, sign * np.transpose(low, perm), atol=1e-12)

    @pytest.mark.parametrize("scheme,n,p", [(1, 3, None), (1, 5, None), (2, 4, 2), (2, 6, 3)])
    def test_jacobi(self, scheme, n, p):
        f = sc_for(scheme, n, p).f
        jac = np.einsum("eab,dec->abcd", f, f, optimize=True)
        jac += np.einsum("ebc,dea->abcd", f, f, optimize=True)
        jac += np.einsum("eca,deb->abcd", f, f, optimize=True)
        assert np.abs(jac).max() < 1e-12

    @pytest.mark.parametrize("scheme,n,p", [(1, 4, None), (2, 5, 3)])
    def test_commutators_reproduced(self, scheme, n, p):
        # f must express every commutator inside the span of the basis
        basis = build_scheme1_basis(n) if scheme == 1 else build_scheme2_basis(n, p)
        sc = sc_for(scheme, n, p)
        T = basis.generators
        comm = np.einsum("aij,bjk->abik", T, T) - np.einsum("bij,ajk->abik", T, T)
        rebuilt = 1j * np.einsum("cab,cij->abij", sc.f, T)
        npt.assert_allclose(comm, rebuilt, atol=1e-12)

    def test_singular_gram_rejected(self):
        T = np.zeros((2, 2, 2), dtype=complex)
        T[0] = [[0, 1], [1, 0]]
        T[1] = [[0, 2], [2, 0]]  # linearly dependent
        bad = GeneratorBasis(n=2, scheme=1, p=None, generators=T,
                             class_of=np.array([0, 0]))
        with pytest.raises(ValueError, match="singular"):
            structure_constants(bad)


class TestValidateBasis:
    @pytest.mark.parametrize("scheme,n,p", [(1, 3, None), (1, 6, None), (2, 4, 2), (2, 7, 3)])
    def test_constructed_bases_pass(self, scheme, n, p):
        basis = build_scheme1_basis(n) if scheme == 1 else build_scheme2_basis(n, p)
        report = validate_basis(basis)
        assert report.passed, report.problems

    def test_su3_report_values(self):
        report = validate_basis(build_scheme1_basis(3))
        npt.assert_allclose(report.gram_diagonal, [2, 2, 2, 2, 2, 2, 1, 1], atol=1e-14)
        assert report.class_sizes == (3, 3, 2)

    def test_corrupted_generator_flagged(self):
        basis = build_scheme1_basis(3)
        T = basis.generators.copy()
        T[0, 0, 0] = 1.0  # nonzero trace, breaks Hermitian tracelessness
        bad = GeneratorBasis(n=3, scheme=1, p=None, generators=T,
                             class_of=basis.class_of.copy())
        report = validate_basis(bad)
        assert not report.passed
        assert any("trace" in p for p in report.problems)


class TestExactValidation:
    @pytest.mark.parametrize("scheme,n,p", [(1, 2, None), (1, 3, None), (2, 3, 2)])
    def test_exact_identities(self, scheme, n, p):
        basis = build_scheme1_basis(n) if scheme == 1 else build_scheme2_basis(n, p)
        result = exact_validate(basis)
        assert result["all_passed"], result

    def test_exact_su2_gram(self):
        result = exact_validate(build_scheme1_basis(2))
        assert [int(g) for g in result["gram_diagonal"]] == [2, 2, 1]

    def test_exact_n4(self):
        result = exact_validate(build_scheme2_basis(4, 2))
        assert result["all_passed"], result
        assert int(result["gram_diagonal"][-1]) == 16
