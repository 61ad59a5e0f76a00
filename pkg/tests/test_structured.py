import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tritospec.conditioning import eig_condition_toeplitz
from tritospec.errors import DegenerateCase, NotHermitian, SubspaceMismatch, ZeroProjection
from tritospec.lab import sample_perturbation
from tritospec.numeric import qr_eigenvalues
from tritospec.structured import (
    Subspace,
    condition_reports,
    cos_theta_structured,
    eig_drift_first_order,
    hermitian_structured_rayleigh,
    project_subspace,
    pseudoeigenvalue_skew,
    pseudoeigenvalue_sym,
    structured_eig_condition,
    structured_eig_condition_projected,
    structured_pseudospectrum,
    wilkinson,
    worst_case_perturbation,
)
from tritospec import structured
from tritospec.toeplitz import ToeplitzTypeCase, TriToeplitz, eigenvalues_toeplitz, unit_right_eigenvector

from conftest import complex_normal, random_toeplitz

# mpmath at 40 digits: project the Wilkinson perturbation and take its norm
FROZEN = [
    (TriToeplitz(6, 2, 1, 0.5), 2, "T", 0.70504983493029274),
    (TriToeplitz(7, 1.5, 0, 1.5), 3, "ST", 0.43780438477252784),
    (TriToeplitz(7, 1.5, 0, -1.5), 3, "AT", 0.37796447300922723),
]


@pytest.mark.parametrize("T,h,s,value", FROZEN)
def test_frozen_structured_values(T, h, s, value):
    assert abs(structured_eig_condition(T, h, s) - value) <= 1e-13 * value
    assert abs(structured_eig_condition_projected(T, h, s) - value) <= 1e-12 * value


def test_wilkinson_examples():
    W = wilkinson(TriToeplitz(2, 1, 0, 1), 1).W
    assert np.allclose(W, 0.5 * np.ones((2, 2)), atol=1e-15)
    W = wilkinson(TriToeplitz(6, 0.7, 2, 0.7), 3).W
    assert np.allclose(W, W.T) and np.allclose(W.imag, 0)
    rng = np.random.default_rng(1)
    for _ in range(20):
        T = random_toeplitz(rng, 9)
        assert abs(np.linalg.norm(wilkinson(T, 4).W) - 1) < 1e-13


def test_wilkinson_corner_profile():
    W = np.abs(wilkinson(TriToeplitz(8, 0.1, 0, 1), 2).W)
    assert W[-1, 0] == W.max()
    W = np.abs(wilkinson(TriToeplitz(8, 10, 0, 1), 2).W)
    assert W[0, -1] == W.max()


def test_projection_examples():
    n = 9
    T = TriToeplitz(n, 1.3, 0.2, 1.3)
    for h in range(1, n + 1):
        P = project_subspace(wilkinson(T, h).W, "ST")
        c = math.cos(h * math.pi / (n + 1))
        assert abs(P.sigma_h - c / (n - 1)) < 1e-14 and P.sigma_h == P.tau_h
        assert abs(P.delta_h - 1 / n) < 1e-14
        Q = project_subspace(wilkinson(T, h).W, "T")
        assert np.allclose(Q.to_dense(), P.to_dense(), atol=1e-12)
    K = TriToeplitz(n, 2.0, -1, -2.0)
    for h in range(1, n + 1):
        P = project_subspace(wilkinson(K, h).W, "AT")
        assert np.allclose(P.to_dense(), np.eye(n) / n, atol=1e-14)
    M = TriToeplitz(5, 1 + 2j, 3, -1j).to_dense()
    P = project_subspace(M, Subspace.T)
    assert (P.sigma_h, P.delta_h, P.tau_h) == (1 + 2j, 3, -1j)
    assert np.array_equal(P.to_dense(), M)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 20), st.integers(0, 2**32 - 1))
def test_projection_is_orthogonal(n, seed):
    rng = np.random.default_rng(seed)
    M = complex_normal(rng, (n, n))
    for s in ("T", "ST", "AT"):
        P = project_subspace(M, s).to_dense()
        assert np.allclose(project_subspace(P, s).to_dense(), P)
        # the residual is orthogonal to every basis direction of the subspace
        R = M - P
        basis = [TriToeplitz(n, *v).to_dense() for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
        if s == "T":
            basis += [1j * B for B in basis]
            ip = [np.vdot(B, R) for B in basis]
        elif s == "ST":
            ip = [np.vdot(basis[0] + basis[2], R).real, np.vdot(basis[1], R).real]
        else:
            ip = [np.vdot(basis[0] - basis[2], R).real, np.vdot(basis[1], R).real]
        assert np.allclose(ip, 0, atol=1e-12 * n)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 20), st.integers(0, 2**32 - 1))
def test_closed_forms_match_definitional_route(n, seed):
    rng = np.random.default_rng(seed)
    T = random_toeplitz(rng, n)
    a, d = rng.standard_normal(2)
    S = TriToeplitz(n, a, d, a)
    K = TriToeplitz(n, a, d, -a)
    for h in range(1, n + 1):
        k = structured_eig_condition(T, h, "T")
        assert abs(k - structured_eig_condition_projected(T, h, "T")) <= 1e-10 * k
        assert k <= eig_condition_toeplitz(T, h) * (1 + 1e-12)
        k = structured_eig_condition(S, h, "ST")
        assert abs(k - structured_eig_condition_projected(S, h, "ST")) <= 1e-10 * k
        assert abs(structured_eig_condition_projected(K, h, "AT") - 1 / math.sqrt(n)) <= 1e-10


def test_named_values():
    assert structured_eig_condition(TriToeplitz(16, 3, 1, -3), 5, "AT") == 0.25
    n = 8
    T = TriToeplitz(n, 2 * cmath.exp(1j), 0, 2 * cmath.exp(-0.5j))
    for h in range(1, n + 1):
        c2 = math.cos(h * math.pi / (n + 1)) ** 2
        assert structured_eig_condition(T, h, "T") == pytest.approx(math.sqrt(1 / n + 2 * c2 / (n - 1)), rel=1e-14)


def test_kappa_t_depends_on_ratio_only():
    rng = np.random.default_rng(5)
    T = random_toeplitz(rng, 11)
    c = complex_normal(rng)
    T2 = TriToeplitz(11, c * T.sigma, T.delta + 3, c * T.tau)
    for h in range(1, 12):
        assert structured_eig_condition(T, h, "T") == pytest.approx(structured_eig_condition(T2, h, "T"), rel=1e-12)


def test_figure_three_independent_of_sigma():
    a = [structured_eig_condition(TriToeplitz(100, 0.3, 1, 0.3), h, "ST") for h in range(1, 101)]
    b = [structured_eig_condition(TriToeplitz(100, -7.5, 0, -7.5), h, "ST") for h in range(1, 101)]
    assert a == b


def test_subspace_mismatch():
    with pytest.raises(SubspaceMismatch):
        structured_eig_condition(TriToeplitz(5, 1, 0, 2), 1, "ST")
    with pytest.raises(SubspaceMismatch):
        structured_eig_condition(TriToeplitz(5, 1, 0, 1), 1, "AT")
    with pytest.raises(SubspaceMismatch):
        structured_eig_condition(TriToeplitz(5, 1j, 0, 1j), 1, "ST")
    with pytest.raises(SubspaceMismatch):
        structured_eig_condition(TriToeplitz(5, 1, 0, 1), 1, "general")


def test_worst_case_perturbation():
    n = 7
    S = TriToeplitz(n, 1.1, 0.5, 1.1)
    for h in range(1, n + 1):
        E = worst_case_perturbation(S, h, "ST")
        assert abs(np.linalg.norm(E) - 1) < 1e-14
        c2 = math.cos(h * math.pi / (n + 1)) ** 2
        assert abs(E[0, 0] - (1 / n) / math.sqrt(1 / n + 2 * c2 / (n - 1))) < 1e-14
    K = TriToeplitz(n, 2, 0, -2)
    assert np.allclose(worst_case_perturbation(K, 3, "AT"), np.eye(n) / math.sqrt(n))


def test_zero_projection(monkeypatch):
    T = TriToeplitz(4, 1, 0, 1)
    monkeypatch.setattr(
        structured, "wilkinson", lambda T, h: structured.WilkinsonPerturbation(h, np.zeros((4, 4)))
    )
    with pytest.raises(ZeroProjection):
        worst_case_perturbation(T, 1, "T")


def test_first_order_drift():
    rng = np.random.default_rng(3)
    T = random_toeplitz(rng, 9)
    for h in (1, 4, 9):
        E = worst_case_perturbation(T, h, "T")
        assert abs(eig_drift_first_order(T, h, E) - structured_eig_condition(T, h, "T")) < 1e-12
        assert abs(eig_drift_first_order(T, h, wilkinson(T, h).W) - eig_condition_toeplitz(T, h)) < 1e-9 * eig_condition_toeplitz(T, h)
        # orthogonal to the projected Wilkinson matrix in the complex inner product
        P = project_subspace(wilkinson(T, h).W, "T").to_dense()
        G = TriToeplitz(9, *complex_normal(rng, 3)).to_dense()
        G = G - np.vdot(P, G) / np.vdot(P, P) * P
        assert eig_drift_first_order(T, h, G / np.linalg.norm(G)) < 1e-12


def test_drift_never_exceeds_structured_condition():
    rng = np.random.default_rng(2)
    T = random_toeplitz(rng, 8)
    S = TriToeplitz(8, 0.9, 0.1, 0.9)
    kT = [structured_eig_condition(T, h, "T") for h in range(1, 9)]
    kS = [structured_eig_condition(S, h, "ST") for h in range(1, 9)]
    for seed in range(1000):
        Et = sample_perturbation(8, "T", seed).E
        Es = sample_perturbation(8, "ST", seed).E
        h = seed % 8 + 1
        assert eig_drift_first_order(T, h, Et) <= kT[h - 1] * (1 + 1e-12)
        assert eig_drift_first_order(S, h, Es) <= kS[h - 1] * (1 + 1e-12)


def test_skew_drift_can_exceed_real_projection_norm():
    # AT is only real-linear; a skew perturbation moves lambda along the
    # imaginary axis, which the real-inner-product projection does not see
    n = 8
    K = TriToeplitz(n, 1.0, 0, -1.0)
    E = TriToeplitz(n, 1.0, 0, -1.0).to_dense()
    E /= np.linalg.norm(E)
    assert eig_drift_first_order(K, 1, E) > structured_eig_condition(K, 1, "AT")


def test_symmetric_pseudoeigenvalues():
    n = 10
    S = TriToeplitz(n, 1.2, -0.3, 1.2)
    lam = eigenvalues_toeplitz(S).real
    eps = 1e-6
    for j in range(1, n + 1):
        assert pseudoeigenvalue_sym(S, j, 1, 0.0) == pytest.approx(lam[j - 1], abs=1e-14)
        up = pseudoeigenvalue_sym(S, j, 1, eps)
        lo = pseudoeigenvalue_sym(S, j, -1, eps)
        assert up - lo == pytest.approx(2 * structured_eig_condition(S, j, "ST") * eps, rel=1e-8)
        E = worst_case_perturbation(S, j, "ST")
        for sign, val in ((1, up), (-1, lo)):
            dense = np.sort(qr_eigenvalues(S.to_dense() + sign * eps * E).real)[::-1]
            assert abs(dense[j - 1] - val) < 1e-12


def test_skew_pseudoeigenvalues():
    n = 9
    K = TriToeplitz(n, -1.5, 0.4, 1.5)
    lam = eigenvalues_toeplitz(K)
    eps = 1e-6
    for h in range(1, n + 1):
        assert abs(pseudoeigenvalue_skew(K, h, 1, 0.0) - lam[h - 1]) < 1e-14
        p = pseudoeigenvalue_skew(K, h, 1, eps)
        m = pseudoeigenvalue_skew(K, h, -1, eps)
        assert p.real - 0.4 == pytest.approx(eps / 3, rel=1e-9)
        assert m.real - 0.4 == pytest.approx(-eps / 3, rel=1e-9)
        dense = qr_eigenvalues(K.to_dense() + eps * np.eye(n) / 3)
        assert np.min(np.abs(dense - p)) < 1e-12
    with pytest.raises(SubspaceMismatch):
        pseudoeigenvalue_skew(TriToeplitz(3, 1, 0, 1), 1, 1, 0.1)


def test_pseudospectrum_descriptions():
    S = TriToeplitz(6, 1.0, 0.0, 1.0)
    b = structured_pseudospectrum(S, 1e-3, "ST")
    assert b.kind == "intervals" and len(b.pieces) == 6
    for h, (lo, hi) in enumerate(b.pieces, start=1):
        assert lo < hi
        assert hi - lo == pytest.approx(2e-3 * structured_eig_condition(S, h, "ST"), rel=1e-9)
    K = TriToeplitz(6, 1.0, 0.0, -1.0)
    b = structured_pseudospectrum(K, 1e-3, "AT")
    assert b.kind == "segments"
    for a, c in b.pieces:
        assert a.imag == c.imag and c.real - a.real == pytest.approx(2e-3 / math.sqrt(6))
    e = structured_pseudospectrum(S, 1e-3, "ellipse", m=64)
    assert e.points.shape == (64,)
    assert np.allclose(e.points.imag, 0, atol=1e-15)
    assert e.points.real.min() == pytest.approx(-2) and e.points.real.max() == pytest.approx(2)
    N = TriToeplitz(6, 1j, 0.5, 1)
    e = structured_pseudospectrum(N, 1e-3, "ellipse", m=16)
    theta = 2 * np.pi * np.arange(16) / 16
    z = np.exp(1j * theta)
    assert np.allclose(N.tau * z + N.delta + N.sigma / z, e.points, atol=1e-15)
    with pytest.raises(SubspaceMismatch):
        structured_pseudospectrum(TriToeplitz(6, 1, 0, 2), 1e-3, "ellipse")


def test_cos_theta_structured():
    rng = np.random.default_rng(6)
    S = TriToeplitz(12, 0.8, 0, 0.8)
    K = TriToeplitz(12, 0.8, 0, -0.8)
    for _ in range(20):
        a, d = rng.standard_normal(2)
        for h in (1, 6, 12):
            assert cos_theta_structured(S, TriToeplitz(12, 0.8 + 0.1 * a, d, 0.8 + 0.1 * a), h) >= 1 - 1e-12
            assert cos_theta_structured(K, TriToeplitz(12, 0.8 + 0.1 * a, d, -0.8 - 0.1 * a), h) >= 1 - 1e-12
    T = TriToeplitz(12, 1j, 0, 1)
    assert cos_theta_structured(T, TriToeplitz(12, 2j, 5, 2), 3) == pytest.approx(1.0, abs=1e-14)
    # against the dense eigenvector of the perturbed matrix
    Te = TriToeplitz(12, 1j + 0.05, 0.2, 1 - 0.03j)
    for h in (2, 7):
        x = unit_right_eigenvector(T, h)
        xe = unit_right_eigenvector(Te, h)
        assert cos_theta_structured(T, Te, h) == pytest.approx(abs(np.vdot(x, xe)), abs=1e-13)
    with pytest.raises(DegenerateCase):
        cos_theta_structured(T, TriToeplitz(12, 0, 0, 1), 1)


def test_hermitian_structured_rayleigh():
    n = 10
    T = TriToeplitz(n, 1 + 1j, 0.5, 1 - 1j)
    r = hermitian_structured_rayleigh(T, 3 * (1 + 1j), 4)
    assert r.lambda_tilde == pytest.approx(eigenvalues_toeplitz(T)[3].real, abs=1e-14)
    assert r.lower == r.upper == 0.0 or (r.lower < 1e-14 and r.upper < 1e-13)
    r = hermitian_structured_rayleigh(T, cmath.rect(1.0, math.pi / 4 + math.pi / 2), 2)
    assert r.lambda_tilde == pytest.approx(0.5, abs=1e-14)
    rng = np.random.default_rng(7)
    for _ in range(50):
        phi = rng.uniform(-0.3, 0.3)
        h = int(rng.integers(1, n + 1))
        r = hermitian_structured_rayleigh(T, cmath.rect(1.3, math.pi / 4 + phi), h)
        # lambda_tilde is the Rayleigh quotient of the perturbed eigenvector
        k = np.arange(1, n + 1)
        v = np.exp(1j * k * (math.pi / 4 + phi)) * np.sin(h * k * np.pi / (n + 1))
        v /= np.linalg.norm(v)
        assert r.lambda_tilde == pytest.approx(np.vdot(v, T.to_dense() @ v).real, abs=1e-13)
        assert r.lower <= r.sin_theta * (1 + 1e-9) and r.sin_theta <= r.upper * (1 + 1e-9)
    with pytest.raises(NotHermitian):
        hermitian_structured_rayleigh(TriToeplitz(4, 1, 0, 2), 1, 1)


def test_condition_reports():
    T = TriToeplitz(6, 1j, 0, -1j)
    rows = condition_reports(T, subspace="T")
    assert [r.h for r in rows] == list(range(1, 7))
    assert all(abs(r.kappa_eig - 1) < 1e-12 for r in rows)
    assert all(r.kappa_vec == pytest.approx(1 / r.min_gap) for r in rows)
    rows = condition_reports(TriToeplitz(6, 1, 0, 0.1), ToeplitzTypeCase.PLUS_MINUS)
    assert all(r.kappa_structured is None and r.kappa_vec > 0 for r in rows)
    with pytest.raises(SubspaceMismatch):
        condition_reports(T, ToeplitzTypeCase.PLUS_MINUS, "T")
