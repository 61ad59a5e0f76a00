"""Eigenvalue gaps, eigenvalue condition numbers and eigenvector condition numbers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import NotHermitian, NotNormal, RankDeficient, ScaleOverflow
from .numeric import householder_qr_pivoted, smallest_singular_value
from .toeplitz import (
    ToeplitzTypeCase,
    TriToeplitz,
    _check_index,
    _require_nondegenerate,
    _sine_factor,
    eigenvalues_toeplitz,
    is_normal,
    type_factor,
    type_norm_sq,
)

C = ToeplitzTypeCase


def _gap_scale(T: TriToeplitz) -> float:
    _require_nondegenerate(T)
    if T.n < 2:
        raise ValueError("eigenvalue gaps need n >= 2")
    return 4.0 * math.sqrt(abs(T.product))


def min_gap_toeplitz(T: TriToeplitz, h: int) -> float:
    """Distance from lambda_h to the nearest other eigenvalue of T."""
    scale = _gap_scale(T)
    h = _check_index(T, h)
    n = T.n
    a = math.pi / (2 * (n + 1))
    if (1 < h <= n / 2) or h == n:
        return scale * math.sin(a) * math.sin((2 * h - 1) * a)
    return scale * math.sin(a) * math.sin((2 * h + 1) * a)


def global_min_gap_toeplitz(T: TriToeplitz) -> float:
    """Smallest eigenvalue distance, attained by the two extremal pairs."""
    scale = _gap_scale(T)
    a = math.pi / (2 * (T.n + 1))
    return scale * math.sin(a) * math.sin(3 * a)


def min_gap_type(T: TriToeplitz, case: ToeplitzTypeCase, h: int) -> float:
    """Distance from lambda_h to the nearest other eigenvalue of a Toeplitz-type matrix.

    The lower branch covers ``1 < h <= n/2`` (``ceil(n/2)`` for the cases with
    a -sqrt(sigma*tau) corner paired with zero, and for the double-minus case)
    together with ``h = n``; the upper branch covers ``h = 1`` and the rest.
    """
    scale = _gap_scale(T)
    h = _check_index(T, h)
    n = T.n
    if case in (C.ZERO_MINUS, C.MINUS_ZERO, C.MINUS_MINUS):
        lower = (1 < h <= math.ceil(n / 2)) or h == n
    else:
        lower = (1 < h <= n / 2) or h == n
    if case in (C.ZERO_PLUS, C.PLUS_ZERO):
        a = math.pi / (2 * n + 1)
        m = (2 * h - 1) if lower else (2 * h + 1)
        return scale * math.sin(a) * math.sin(m * a)
    if case in (C.ZERO_MINUS, C.MINUS_ZERO):
        a = math.pi / (2 * n + 1)
        m = 2 * (h - 1) if lower else 2 * h
        return scale * math.sin(a) * math.sin(m * a)
    if case in (C.PLUS_MINUS, C.MINUS_PLUS):
        # neighbouring angles differ by pi/n, so the half-difference is pi/(2n)
        m = (h - 1) if lower else h
        return scale * math.sin(math.pi / (2 * n)) * math.sin(m * math.pi / n)
    a = math.pi / (2 * n)
    if case is C.PLUS_PLUS:
        m = (2 * h - 1) if lower else (2 * h + 1)
    else:
        m = (2 * h - 3) if lower else (2 * h - 1)
    return scale * math.sin(a) * math.sin(m * a)


def global_min_gap_type(T: TriToeplitz, case: ToeplitzTypeCase) -> float:
    scale = _gap_scale(T)
    n = T.n
    if case in (C.PLUS_MINUS, C.MINUS_PLUS):
        return scale * math.sin(math.pi / (2 * n)) * math.sin(math.pi / n)
    if case in (C.PLUS_PLUS, C.MINUS_MINUS):
        return scale * math.sin(math.pi / (2 * n)) ** 2
    a = math.pi / (2 * n + 1)
    return scale * math.sin(a) * math.sin(2 * a)


def _log_weighted_sum(log_ratio: float, weights: np.ndarray) -> float:
    """log of sum_k exp(k*log_ratio) * weights_k, computed without overflow."""
    k = np.arange(1, weights.size + 1)
    mask = weights > 0
    expo = k[mask] * log_ratio
    top = expo.max()
    return float(top + math.log(np.sum(np.exp(expo - top) * weights[mask])))


def _kappa_from_factor(T: TriToeplitz, factor: np.ndarray, denom: float) -> float:
    log_ratio = math.log(abs(T.sigma) / abs(T.tau))
    w = factor**2
    log_xy = 0.5 * (_log_weighted_sum(log_ratio, w) + _log_weighted_sum(-log_ratio, w))
    log_kappa = log_xy - math.log(denom)
    if log_kappa > math.log(np.finfo(float).max):
        raise ScaleOverflow(f"eigenvalue condition number of {T} overflows float64")
    return math.exp(log_kappa)


def eig_condition_toeplitz(T: TriToeplitz, h: int) -> float:
    """kappa(lambda_h) = ||x_h|| ||y_h|| / |y_h^H x_h| from the closed forms.

    Depends only on h, n and |sigma/tau|; equals 1 when |sigma| == |tau|.
    """
    _require_nondegenerate(T)
    h = _check_index(T, h)
    return _kappa_from_factor(T, _sine_factor(h, T.n), (T.n + 1) / 2)


def eig_condition_type(T: TriToeplitz, case: ToeplitzTypeCase, h: int) -> float:
    """Eigenvalue condition number for a Toeplitz-type case.

    At the edge indices (h = n for the double-plus case, h = 1 for the
    double-minus case) the trigonometric factor is constant in modulus and the
    squared sum equals n rather than n/2.
    """
    _require_nondegenerate(T)
    h = _check_index(T, h)
    n = T.n
    factor = type_factor(case, h, n)
    edge = (case is C.PLUS_PLUS and h == n) or (case is C.MINUS_MINUS and h == 1)
    denom = float(n) if edge else type_norm_sq(case, n)
    return _kappa_from_factor(T, factor, denom)


def eigvec_condition_normal(
    T: TriToeplitz, h: int, case: Optional[ToeplitzTypeCase] = None
) -> float:
    """Eigenvector condition number of a normal (Toeplitz or Toeplitz-type) matrix.

    For normal matrices this is the reciprocal of the distance to the nearest
    other eigenvalue.
    """
    if not is_normal(T):
        raise NotNormal(f"|sigma| != |tau| for {T}")
    gap = min_gap_toeplitz(T, h) if case is None else min_gap_type(T, case, h)
    return 1.0 / gap


def max_eigvec_condition_normal(T: TriToeplitz, case: Optional[ToeplitzTypeCase] = None) -> float:
    if not is_normal(T):
        raise NotNormal(f"|sigma| != |tau| for {T}")
    gap = global_min_gap_toeplitz(T) if case is None else global_min_gap_type(T, case)
    return 1.0 / gap


def eigvec_condition_general(A, mu: complex, x=None, rank_tol: float = 1e-12) -> float:
    """Condition number of the eigenvector of a simple eigenvalue mu of A.

    U is an orthonormal basis of Range(A - mu I), taken as the first n-1
    columns of a column-pivoted Householder QR of A - mu I. The result is
    ``||(mu I - U^H A U)^{-1}||_2``, the reciprocal of the smallest singular
    value of the deflated operator. ``x`` (the unit eigenvector) is accepted
    for interface symmetry; the construction does not need it.

    Raises RankDeficient when A - mu I has numerical rank below n-1.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if n < 2:
        raise ValueError("eigenvector condition numbers need n >= 2")
    Q, R, _ = householder_qr_pivoted(A - mu * np.eye(n))
    d = np.abs(np.diag(R))
    if d[0] == 0.0 or d[n - 2] <= rank_tol * d[0]:
        raise RankDeficient(
            f"A - mu I has numerical rank < n-1 (|R[n-2,n-2]| = {d[n - 2]:.3e}, "
            f"|R[0,0]| = {d[0]:.3e}); mu is not a simple eigenvalue at working precision"
        )
    U = Q[:, : n - 1]
    deflated = mu * np.eye(n - 1) - U.conj().T @ A @ U
    sep = smallest_singular_value(deflated)
    return math.inf if sep == 0.0 else 1.0 / sep


def _require_hermitian(T: TriToeplitz) -> None:
    scale = max(abs(T.sigma), abs(T.tau), abs(T.delta), 1e-300)
    if abs(T.tau - T.sigma.conjugate()) > 1e-12 * scale or abs(T.delta.imag) > 1e-12 * scale:
        raise NotHermitian(f"{T} is not Hermitian (need tau = conj(sigma), real delta)")


class RayleighBounds(NamedTuple):
    lower: float
    upper: float
    rq: float
    residual: float
    spread: float
    stated_spread: float


def rayleigh_bounds_hermitian(T: TriToeplitz, x_eps, h: int) -> RayleighBounds:
    """Two-sided bounds on the angle between x_eps and the h-th eigenvector.

    With rq the Rayleigh quotient and r the residual norm of the unit vector
    x_eps, ``r / spread <= sin(theta) <= r / min_{k != h} |lambda_k - rq|``.
    The spread is lambda_max - lambda_min of the exact spectrum, i.e.
    4|sigma|cos(pi/(n+1)); ``stated_spread`` carries the value
    2|sigma|cos(pi/(n+1)) that is sometimes quoted, for comparison only.
    """
    _require_hermitian(T)
    h = _check_index(T, h)
    n = T.n
    x = np.asarray(x_eps, dtype=complex)
    x = x / np.linalg.norm(x)
    A = T.to_dense()
    rq = float(np.vdot(x, A @ x).real)
    residual = float(np.linalg.norm(A @ x - rq * x))
    lam = eigenvalues_toeplitz(T).real
    spread = float(lam.max() - lam.min())
    stated = 2 * abs(T.sigma) * math.cos(math.pi / (n + 1))
    others = np.delete(lam, h - 1)
    gap = float(np.min(np.abs(others - rq))) if others.size else math.inf
    lower = 0.0 if residual == 0.0 else residual / spread
    upper = 0.0 if residual == 0.0 else residual / gap
    return RayleighBounds(lower, upper, rq, residual, spread, stated)


@dataclass(frozen=True)
class ConditionReport:
    h: int
    lam: complex
    min_gap: float
    kappa_eig: float
    kappa_vec: float
    kappa_structured: Optional[float] = None
