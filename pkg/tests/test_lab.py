import math

import numpy as np
import pytest

from tritospec.conditioning import eig_condition_toeplitz
from tritospec.errors import AmbiguousMatch
from tritospec.lab import (
    BoundCheck,
    closed_form_decomposition,
    fd_eigenvalue_slope,
    match_continuation,
    perturbed_decomposition,
    random_normal_toeplitz,
    run_bound_suite,
    sample_perturbation,
    verify_all,
    verify_sin_theta,
)
from tritospec.numeric import EigenDecomposition
from tritospec.structured import structured_eig_condition, wilkinson, worst_case_perturbation
from tritospec.toeplitz import ToeplitzTypeCase, TriToeplitz, unit_left_eigenvector, unit_right_eigenvector

from conftest import random_toeplitz


def test_samples_lie_in_their_subspace():
    n = 6
    E = sample_perturbation(n, "ST", 4).E
    assert np.allclose(E.imag, 0) and np.allclose(E, E.T)
    assert np.allclose(np.diag(E, 1), np.diag(E, 1)[0]) and np.allclose(np.diag(E), np.diag(E)[0])
    assert np.count_nonzero(np.triu(E, 2)) == 0
    E = sample_perturbation(n, "AT", 4).E
    assert np.allclose(E.imag, 0) and np.allclose(np.diag(E, 1), -np.diag(E, -1))
    E = sample_perturbation(n, "T", 4).E
    assert np.count_nonzero(np.tril(E, -2)) == 0
    assert np.array_equal(sample_perturbation(n, "general", 9).E, sample_perturbation(n, "general", 9).E)
    assert not np.array_equal(sample_perturbation(n, "general", 9).E, sample_perturbation(n, "general", 10).E)


def test_sample_norm_audit():
    norms = [np.linalg.norm(sample_perturbation(10, "general", s).E) for s in range(1000)]
    assert abs(np.mean(norms) - 1) < 1e-12
    for s in ("T", "ST", "AT"):
        assert abs(np.linalg.norm(sample_perturbation(1, s, 0).E) - 1) < 1e-15
    with pytest.raises(ValueError):
        sample_perturbation(0, "general", 0)


def _decomp(M):
    return EigenDecomposition(np.arange(M.shape[1], dtype=complex), M)


def test_matching_identity_and_permutation():
    rng = np.random.default_rng(1)
    Q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    F = _decomp(Q)
    assert np.array_equal(match_continuation(F, F), np.arange(6))
    perm = rng.permutation(6)
    p = match_continuation(F, _decomp(Q[:, perm]))
    assert np.array_equal(perm[p], np.arange(6))


def test_matching_refuses_large_rotations():
    # every overlap of the DFT basis with the coordinate basis is 1/sqrt(3)
    k = np.arange(3)
    dft = np.exp(-2j * np.pi * np.outer(k, k) / 3) / math.sqrt(3)
    with pytest.raises(AmbiguousMatch):
        match_continuation(_decomp(np.eye(3)), _decomp(dft))


def test_matching_small_structured_step():
    T = TriToeplitz(20, 1, 0, 1)
    F, F_eps, p = perturbed_decomposition(T, sample_perturbation(20, "T", 3).E, 1e-4)
    # the solver returns eigenvalues in deflation order; after sorting them the
    # continuation pairs each lambda_h with the h-th perturbed eigenvalue
    v = F_eps.values
    assert np.array_equal(p, np.lexsort((-v.imag, -v.real)))
    assert np.max(np.abs(v[p] - F.values)) < 1e-3


def test_zero_step_passes_trivially():
    T = TriToeplitz(5, 1, 0, 1)
    chk = verify_sin_theta(T, sample_perturbation(5, "general", 0).E, 0.0, 2)
    assert chk == BoundCheck(2, 0.0, 0.0, True)


def test_bound_for_normal_matrices():
    for seed in range(200):
        T = random_normal_toeplitz(6, seed)
        E = sample_perturbation(6, "general", seed).E
        for chk in verify_all(T, E, 1e-6):
            assert chk.passed, (seed, chk)
    chk = verify_sin_theta(TriToeplitz(6, 1, 0, 1), sample_perturbation(6, "general", 1).E, 1e-6, 3)
    assert chk.passed and 0 < chk.measured <= chk.bound


def test_type_targets():
    T = TriToeplitz(7, 1j, 0, 1)
    E = sample_perturbation(7, "general", 2).E
    for case in (ToeplitzTypeCase.PLUS_MINUS, "++"):
        checks = verify_all((T, case), E, 1e-7)
        assert all(c.passed for c in checks)
    F = closed_form_decomposition((T, "++"))
    assert F.values.shape == (7,)


def test_symmetric_structure_keeps_eigenvectors():
    T = TriToeplitz(9, 1, 0.3, 1)
    for seed in range(10):
        E = sample_perturbation(9, "ST", seed).E
        assert max(c.measured for c in verify_all(T, E, 1e-3)) <= 1e-12


def test_slopes_match_condition_numbers():
    T = random_toeplitz(np.random.default_rng(3), 8)
    for h in (1, 4, 8):
        kt = structured_eig_condition(T, h, "T")
        k = eig_condition_toeplitz(T, h)
        st = fd_eigenvalue_slope(T, worst_case_perturbation(T, h, "T"), h, 1e-6)
        su = fd_eigenvalue_slope(T, wilkinson(T, h).W, h, 1e-6)
        assert abs(st / kt - 1) < 0.05
        assert abs(su / k - 1) < 0.05
        assert st <= su * (1 + 1e-6)
    assert fd_eigenvalue_slope(T, wilkinson(T, 2).W, 2) > 0
    with pytest.raises(ValueError):
        fd_eigenvalue_slope(T, wilkinson(T, 2).W, 2, t=0.0)


def test_second_order_slope():
    T = random_toeplitz(np.random.default_rng(5), 7)
    h = 3
    x = unit_right_eigenvector(T, h)
    y = unit_left_eigenvector(T, h)
    E = sample_perturbation(7, "general", 1).E
    E = E - np.vdot(y, E @ x) * np.outer(y, x.conj())
    E /= np.linalg.norm(E)
    assert abs(np.vdot(y, E @ x)) < 1e-14
    assert fd_eigenvalue_slope(T, E, h, 1e-6) <= 1e-4 * eig_condition_toeplitz(T, h)


def test_structured_slope_below_unstructured():
    rng = np.random.default_rng(12)
    for seed in range(20):
        T = random_toeplitz(rng, 6)
        h = seed % 6 + 1
        E = sample_perturbation(6, "T", seed).E
        assert fd_eigenvalue_slope(T, E, h, 1e-7) <= eig_condition_toeplitz(T, h) * (1 + 1e-4)


def test_suite_report():
    rep = run_bound_suite(ns=(5, 8), seeds=3)
    assert rep.total == 3 * 13 and rep.pass_rate == 1.0 and rep.failures == []
    assert 0 < rep.worst_ratio <= 1
    d = rep.as_dict()
    assert d["passed"] == d["total"]
    rep = run_bound_suite(seeds=[0, 1], target=TriToeplitz(6, 1, 0, 1), subspace="ST", eps=1e-4)
    assert rep.total == 12 and rep.pass_rate == 1.0
