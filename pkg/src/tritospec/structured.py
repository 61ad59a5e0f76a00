"""Wilkinson perturbations, projections onto Toeplitz structure subspaces,
structured condition numbers and structured pseudospectra.

Three structure subspaces are supported:

``T``   all tridiagonal Toeplitz matrices (complex-linear);
``ST``  real symmetric tridiagonal Toeplitz matrices;
``AT``  real shifted skew-symmetric tridiagonal Toeplitz matrices (sigma = -tau).

``ST`` and ``AT`` are only real-linear, so projections onto them use the real
inner product ``<A, B> = Re trace(B^H A)``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .conditioning import (
    ConditionReport,
    eig_condition_toeplitz,
    eig_condition_type,
    eigvec_condition_general,
    eigvec_condition_normal,
    min_gap_toeplitz,
    min_gap_type,
    rayleigh_bounds_hermitian,
    _require_hermitian,
)
from .errors import DegenerateCase, SubspaceMismatch, ZeroProjection
from .toeplitz import (
    ToeplitzTypeCase,
    TriToeplitz,
    _check_index,
    _require_nondegenerate,
    _sine_factor,
    eigenvalues_toeplitz,
    eigenvalues_type,
    is_normal,
    ratio_root,
    type_matrix,
    unit_left_eigenvector,
    unit_right_eigenvector,
)

STRUCT_TOL = 1e-12


class Subspace(enum.Enum):
    GENERAL = "general"
    T = "T"
    ST = "ST"
    AT = "AT"

    @classmethod
    def parse(cls, text) -> Optional[Subspace]:
        if text is None or isinstance(text, Subspace):
            return text
        key = str(text).strip()
        if key.lower() in ("none", ""):
            return None
        for s in cls:
            if key == s.value or key.upper() == s.name:
                return s
        raise ValueError(f"unknown subspace {text!r}; expected none, T, ST, AT or general")


@dataclass(frozen=True)
class WilkinsonPerturbation:
    h: int
    W: np.ndarray


@dataclass(frozen=True)
class StructuredProjection:
    subspace: Subspace
    sigma_h: complex
    delta_h: complex
    tau_h: complex
    frobenius_norm: float
    n: int

    def to_dense(self) -> np.ndarray:
        return TriToeplitz(self.n, self.sigma_h, self.delta_h, self.tau_h).to_dense()


def wilkinson(T: TriToeplitz, h: int) -> WilkinsonPerturbation:
    """Rank-one unit perturbation y~_h x~_h^H that moves lambda_h the most."""
    _require_nondegenerate(T)
    h = _check_index(T, h)
    x = unit_right_eigenvector(T, h)
    y = unit_left_eigenvector(T, h)
    return WilkinsonPerturbation(h, np.outer(y, x.conj()))


def project_subspace(W, subspace, n: Optional[int] = None) -> StructuredProjection:
    """Orthogonal projection of an n-by-n matrix onto a Toeplitz structure subspace."""
    s = Subspace.parse(subspace)
    W = np.asarray(W, dtype=complex)
    if n is None:
        n = W.shape[0]
    if W.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got shape {W.shape}")
    d = np.diag(W)
    lo = np.diag(W, -1)
    up = np.diag(W, 1)
    delta = complex(d.mean())
    if n == 1:
        sigma = tau = 0j
        if s in (Subspace.ST, Subspace.AT):
            delta = complex(delta.real)
    elif s is Subspace.T:
        sigma, tau = complex(lo.mean()), complex(up.mean())
    elif s is Subspace.ST:
        delta = complex(d.real.mean())
        sigma = tau = complex((lo.real.sum() + up.real.sum()) / (2 * (n - 1)))
    elif s is Subspace.AT:
        delta = complex(d.real.mean())
        sigma = complex((lo.real.sum() - up.real.sum()) / (2 * (n - 1)))
        tau = -sigma
    else:
        raise ValueError(f"cannot project onto subspace {s}")
    norm = math.sqrt(n * abs(delta) ** 2 + (n - 1) * (abs(sigma) ** 2 + abs(tau) ** 2))
    return StructuredProjection(s, sigma, delta, tau, norm, n)


def _is_real(z: complex, scale: float) -> bool:
    return abs(z.imag) <= STRUCT_TOL * scale


def check_subspace(T: TriToeplitz, subspace) -> Subspace:
    """Raise SubspaceMismatch unless T belongs to the given structure subspace."""
    s = Subspace.parse(subspace)
    scale = max(abs(T.sigma), abs(T.tau), abs(T.delta), 1e-300)
    if s is Subspace.ST:
        ok = (
            _is_real(T.sigma, scale)
            and _is_real(T.delta, scale)
            and abs(T.sigma - T.tau) <= STRUCT_TOL * scale
        )
        if not ok:
            raise SubspaceMismatch(f"{T} is not real symmetric Toeplitz")
    elif s is Subspace.AT:
        ok = (
            _is_real(T.sigma, scale)
            and _is_real(T.delta, scale)
            and abs(T.sigma + T.tau) <= STRUCT_TOL * scale
        )
        if not ok:
            raise SubspaceMismatch(f"{T} is not real shifted skew-symmetric Toeplitz")
    elif s is not Subspace.T:
        raise SubspaceMismatch(f"no structured condition number for subspace {s}")
    return s


def structured_eig_condition(T: TriToeplitz, h: int, subspace) -> float:
    """Structured eigenvalue condition number from the closed forms.

    T:  sqrt(1/n + (|sigma/tau| + |tau/sigma|) cos^2(h pi/(n+1)) / (n-1))
    ST: sqrt(1/n + 2 cos^2(h pi/(n+1)) / (n-1))
    AT: 1/sqrt(n)
    """
    s = check_subspace(T, subspace)
    _require_nondegenerate(T)
    h = _check_index(T, h)
    n = T.n
    if s is Subspace.AT:
        return 1.0 / math.sqrt(n)
    if n == 1:
        return 1.0
    c2 = math.cos(h * math.pi / (n + 1)) ** 2
    if s is Subspace.ST:
        return math.sqrt(1.0 / n + 2.0 * c2 / (n - 1))
    q = abs(T.sigma) / abs(T.tau)
    return math.sqrt(1.0 / n + (q + 1.0 / q) * c2 / (n - 1))


def structured_eig_condition_projected(T: TriToeplitz, h: int, subspace) -> float:
    """Same quantity by projecting the Wilkinson perturbation and taking its norm."""
    s = check_subspace(T, subspace)
    x = unit_right_eigenvector(T, h)
    y = unit_left_eigenvector(T, h)
    proj = project_subspace(np.outer(y, x.conj()), s)
    return proj.frobenius_norm / abs(np.vdot(y, x))


def worst_case_perturbation(T: TriToeplitz, h: int, subspace) -> np.ndarray:
    """Unit-norm structured matrix with the largest first-order drift of lambda_h."""
    s = check_subspace(T, subspace)
    proj = project_subspace(wilkinson(T, h).W, s)
    if proj.frobenius_norm <= 1e-14:
        raise ZeroProjection(f"projection of W_{h} onto {s.value} vanishes")
    return proj.to_dense() / proj.frobenius_norm


def eig_drift_first_order(T: TriToeplitz, h: int, E) -> float:
    """|y~^H E x~| / |y~^H x~|, the first-order rate of change of lambda_h along E."""
    h = _check_index(T, h)
    x = unit_right_eigenvector(T, h)
    y = unit_left_eigenvector(T, h)
    E = np.asarray(E, dtype=complex)
    return abs(np.vdot(y, E @ x)) / abs(np.vdot(y, x))


def _worst_case_entries_sym(n: int, j: int):
    """(sigma_hat, delta_hat) of the unit symmetric worst-case perturbation."""
    c = math.cos(j * math.pi / (n + 1))
    if n == 1:
        return 0.0, 1.0
    kappa = math.sqrt(1.0 / n + 2.0 * c * c / (n - 1))
    return c / ((n - 1) * kappa), 1.0 / (n * kappa)


def pseudoeigenvalue_sym(T: TriToeplitz, j: int, eps_sign: int, eps: float) -> float:
    """Eigenvalue j of T +/- eps times the symmetric worst-case perturbation."""
    check_subspace(T, Subspace.ST)
    j = _check_index(T, j)
    if eps < 0:
        raise ValueError("eps must be non-negative")
    sign = 1 if eps_sign >= 0 else -1
    n = T.n
    s_hat, d_hat = _worst_case_entries_sym(n, j)
    c = math.cos(j * math.pi / (n + 1))
    sigma = T.sigma.real
    return T.delta.real + sign * eps * d_hat + 2 * (sigma + sign * eps * s_hat) * c


def pseudoeigenvalue_skew(T: TriToeplitz, h: int, eps_sign: int, eps: float) -> complex:
    """Eigenvalue h of T +/- eps I/sqrt(n) for a shifted skew-symmetric T."""
    check_subspace(T, Subspace.AT)
    h = _check_index(T, h)
    if eps < 0:
        raise ValueError("eps must be non-negative")
    sign = 1 if eps_sign >= 0 else -1
    n = T.n
    return complex(
        T.delta.real + sign * eps / math.sqrt(n),
        2 * abs(T.sigma) * math.cos(h * math.pi / (n + 1)),
    )


@dataclass(frozen=True)
class PseudospectrumBoundary:
    """``kind`` is ``intervals`` (real), ``segments`` (complex endpoints) or ``ellipse``."""

    kind: str
    eps: float
    pieces: list
    points: Optional[np.ndarray] = None


def structured_pseudospectrum(T: TriToeplitz, eps: float, mode, m: int = 256) -> PseudospectrumBoundary:
    """First-order structured eps-pseudospectrum description.

    ``ST``: one real interval per eigenvalue; ``AT``: one segment per eigenvalue
    joining the two pseudoeigenvalues; ``ellipse``: m points of the curve
    tau e^{i theta} + delta + sigma e^{-i theta}, emitted as a reference curve
    for normal T only.
    """
    if str(mode).lower() == "ellipse":
        if not is_normal(T):
            raise SubspaceMismatch("ellipse mode needs a normal T (|sigma| == |tau|)")
        theta = 2 * np.pi * np.arange(m) / m
        pts = T.tau * np.exp(1j * theta) + T.delta + T.sigma * np.exp(-1j * theta)
        return PseudospectrumBoundary("ellipse", eps, [], pts)
    s = check_subspace(T, mode)
    h_all = range(1, T.n + 1)
    if s is Subspace.ST:
        pieces = []
        for h in h_all:
            a = pseudoeigenvalue_sym(T, h, -1, eps)
            b = pseudoeigenvalue_sym(T, h, +1, eps)
            pieces.append((min(a, b), max(a, b)))
        return PseudospectrumBoundary("intervals", eps, pieces)
    if s is Subspace.AT:
        pieces = [
            (pseudoeigenvalue_skew(T, h, -1, eps), pseudoeigenvalue_skew(T, h, +1, eps))
            for h in h_all
        ]
        return PseudospectrumBoundary("segments", eps, pieces)
    raise SubspaceMismatch("structured pseudospectrum is available for ST, AT or ellipse mode")


def _scaled_powers(z: complex, n: int, shift: float) -> np.ndarray:
    k = np.arange(1, n + 1)
    return np.exp(k * math.log(abs(z)) - shift) * np.exp(1j * k * cmath.phase(z))


def cos_theta_structured(T: TriToeplitz, T_eps: TriToeplitz, h: int) -> float:
    """Cosine of the angle between the h-th unit eigenvectors of normal T and T_eps.

    Depends only on sigma_eps/tau_eps, not on delta_eps.
    """
    if T.n != T_eps.n:
        raise ValueError("T and T_eps must have the same order")
    if T.degenerate or T_eps.degenerate:
        raise DegenerateCase("cos_theta_structured needs sigma*tau != 0 for both matrices")
    if not is_normal(T):
        raise ValueError("cos_theta_structured needs a normal T")
    h = _check_index(T, h)
    n = T.n
    s2 = _sine_factor(h, n) ** 2
    r = ratio_root(T)
    r_eps = ratio_root(T_eps)
    shift = max(0.0, n * math.log(abs(r_eps)))
    q = _scaled_powers(r.conjugate() * r_eps, n, shift)
    num = abs(np.sum(q * s2))
    mag = np.abs(_scaled_powers(r_eps, n, shift)) ** 2
    # the shift appears once in the numerator and twice under the square root
    den = math.sqrt((n + 1) / 2 * float(np.sum(mag * s2)))
    return min(1.0, num / den)


class StructuredRayleigh(NamedTuple):
    lambda_tilde: float
    lower: float
    upper: float
    residual: float
    sin_theta: float


def hermitian_structured_rayleigh(T: TriToeplitz, sigma_eps: complex, h: int) -> StructuredRayleigh:
    """Rayleigh quotient and angle bounds for a Hermitian-structured perturbation.

    The perturbed Hermitian matrix has off-diagonals sigma_eps and conj(sigma_eps);
    its h-th eigenvector has entries exp(i k arg sigma_eps) sin(h k pi/(n+1)).
    The Rayleigh quotient of that vector with respect to T is
    delta + 2|sigma| cos(arg sigma - arg sigma_eps) cos(h pi/(n+1)).
    """
    _require_hermitian(T)
    h = _check_index(T, h)
    sigma_eps = complex(sigma_eps)
    if sigma_eps == 0:
        raise DegenerateCase("sigma_eps must be nonzero")
    n = T.n
    k = np.arange(1, n + 1)
    s = _sine_factor(h, n)
    dphi = cmath.phase(T.sigma) - cmath.phase(sigma_eps)
    lam_tilde = T.delta.real + 2 * abs(T.sigma) * math.cos(dphi) * math.cos(h * math.pi / (n + 1))
    x_eps = np.exp(1j * k * cmath.phase(sigma_eps)) * s
    x = np.exp(1j * k * cmath.phase(T.sigma)) * s
    bounds = rayleigh_bounds_hermitian(T, x_eps, h)
    xe = x_eps / np.linalg.norm(x_eps)
    xu = x / np.linalg.norm(x)
    sin_theta = float(np.linalg.norm(xe - np.vdot(xu, xe) * xu))
    return StructuredRayleigh(lam_tilde, bounds.lower, bounds.upper, bounds.residual, sin_theta)


def condition_reports(
    T: TriToeplitz,
    case: Optional[ToeplitzTypeCase] = None,
    subspace=None,
) -> list[ConditionReport]:
    """Per-eigenvalue gap, eigenvalue and eigenvector condition numbers."""
    _require_nondegenerate(T)
    s = Subspace.parse(subspace)
    if case is not None and s is not None:
        raise SubspaceMismatch("structured condition numbers are defined for Toeplitz T only")
    if s is not None:
        check_subspace(T, s)
    n = T.n
    if case is None:
        lam = eigenvalues_toeplitz(T)
        A = T.to_dense()
    else:
        lam = eigenvalues_type(T, case)
        A = type_matrix(T, case)
    normal = is_normal(T)
    reports = []
    for h in range(1, n + 1):
        if case is None:
            gap = min_gap_toeplitz(T, h) if n > 1 else math.inf
            k_eig = eig_condition_toeplitz(T, h)
        else:
            gap = min_gap_type(T, case, h) if n > 1 else math.inf
            k_eig = eig_condition_type(T, case, h)
        if n == 1:
            k_vec = 0.0
        elif normal:
            k_vec = eigvec_condition_normal(T, h, case)
        else:
            k_vec = eigvec_condition_general(A, lam[h - 1])
        k_s = structured_eig_condition(T, h, s) if s is not None else None
        reports.append(ConditionReport(h, complex(lam[h - 1]), gap, k_eig, k_vec, k_s))
    return reports
