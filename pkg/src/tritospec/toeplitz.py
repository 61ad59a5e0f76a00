"""Closed-form spectra of tridiagonal Toeplitz and Toeplitz-type matrices.

``TriToeplitz(n, sigma, delta, tau)`` has constant subdiagonal sigma, diagonal
delta and superdiagonal tau. The Toeplitz-type variants subtract alpha from the
first and beta from the last diagonal entry, with alpha, beta drawn from
{0, +sqrt(sigma*tau), -sqrt(sigma*tau)}.

Branches: ``sqrt(sigma*tau)`` is the principal root and the eigenvector ratio is
``r = sqrt(sigma*tau) / tau``. Then r**2 == sigma/tau and tau*r equals the same
root that enters the eigenvalues, so x_h is always paired with lambda_h. The
left ratio is ``1 / conj(r)``, which makes y_h^H x_h a plain sum of squared
trigonometric factors.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateCase, ScaleOverflow
from .numeric import TridiagonalMatrix

LOG_MAX = math.log(np.finfo(float).max)
NORMAL_TOL = 1e-12


@dataclass(frozen=True)
class TriToeplitz:
    n: int
    sigma: complex
    delta: complex
    tau: complex

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"order n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        for name in ("sigma", "delta", "tau"):
            value = complex(getattr(self, name))
            if not cmath.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def product(self) -> complex:
        return self.sigma * self.tau

    @property
    def degenerate(self) -> bool:
        return self.sigma * self.tau == 0

    def root(self) -> complex:
        """Principal sqrt(sigma*tau)."""
        return cmath.sqrt(self.product)

    def to_tridiagonal(self) -> TridiagonalMatrix:
        m = self.n - 1
        return TridiagonalMatrix(
            np.full(m, self.sigma), np.full(self.n, self.delta), np.full(m, self.tau)
        )

    def to_dense(self) -> np.ndarray:
        return self.to_tridiagonal().to_dense()

    def fro(self) -> float:
        n = self.n
        return math.sqrt(
            n * abs(self.delta) ** 2 + (n - 1) * (abs(self.sigma) ** 2 + abs(self.tau) ** 2)
        )


class ToeplitzTypeCase(enum.Enum):
    """Corner modifications (sign of alpha, sign of beta) in units of sqrt(sigma*tau)."""

    ZERO_PLUS = (0, 1)
    PLUS_ZERO = (1, 0)
    ZERO_MINUS = (0, -1)
    MINUS_ZERO = (-1, 0)
    PLUS_MINUS = (1, -1)
    MINUS_PLUS = (-1, 1)
    PLUS_PLUS = (1, 1)
    MINUS_MINUS = (-1, -1)

    @property
    def alpha_sign(self) -> int:
        return self.value[0]

    @property
    def beta_sign(self) -> int:
        return self.value[1]

    @property
    def label(self) -> str:
        sym = {0: "0", 1: "+", -1: "-"}
        return sym[self.alpha_sign] + sym[self.beta_sign]

    @classmethod
    def parse(cls, text: str) -> ToeplitzTypeCase:
        """Accept enum names (``plus_minus``) or sign labels (``+-``, ``0+``)."""
        key = text.strip()
        for case in cls:
            if key.upper() == case.name or key == case.label:
                return case
        raise ValueError(
            f"unknown Toeplitz-type case {text!r}; expected one of "
            + ", ".join(f"{c.name.lower()} ({c.label})" for c in cls)
        )


@dataclass(frozen=True)
class _CaseRule:
    # eigenvalue angle as a function of (h, n)
    angle: Callable[[np.ndarray, int], np.ndarray]
    # eigenvector trigonometric factor as a function of (h, k, n)
    factor: Callable[[int, np.ndarray, int], np.ndarray]
    # sum over k of factor**2 for generic h
    norm_sq: Callable[[int], float]


_RULES = {
    ToeplitzTypeCase.ZERO_PLUS: _CaseRule(
        lambda h, n: 2 * h * np.pi / (2 * n + 1),
        lambda h, k, n: np.sin(2 * h * k * np.pi / (2 * n + 1)),
        lambda n: (2 * n + 1) / 4,
    ),
    ToeplitzTypeCase.PLUS_ZERO: _CaseRule(
        lambda h, n: 2 * h * np.pi / (2 * n + 1),
        lambda h, k, n: np.sin(h * (2 * k - 1) * np.pi / (2 * n + 1)),
        lambda n: (2 * n + 1) / 4,
    ),
    ToeplitzTypeCase.ZERO_MINUS: _CaseRule(
        lambda h, n: (2 * h - 1) * np.pi / (2 * n + 1),
        lambda h, k, n: np.sin((2 * h - 1) * k * np.pi / (2 * n + 1)),
        lambda n: (2 * n + 1) / 4,
    ),
    ToeplitzTypeCase.MINUS_ZERO: _CaseRule(
        lambda h, n: (2 * h - 1) * np.pi / (2 * n + 1),
        lambda h, k, n: np.cos((2 * h - 1) * (2 * k - 1) * np.pi / (2 * (2 * n + 1))),
        lambda n: (2 * n + 1) / 4,
    ),
    ToeplitzTypeCase.PLUS_MINUS: _CaseRule(
        lambda h, n: (2 * h - 1) * np.pi / (2 * n),
        lambda h, k, n: np.sin((2 * h - 1) * (2 * k - 1) * np.pi / (4 * n)),
        lambda n: n / 2,
    ),
    ToeplitzTypeCase.MINUS_PLUS: _CaseRule(
        lambda h, n: (2 * h - 1) * np.pi / (2 * n),
        lambda h, k, n: np.cos((2 * h - 1) * (2 * k - 1) * np.pi / (4 * n)),
        lambda n: n / 2,
    ),
    ToeplitzTypeCase.PLUS_PLUS: _CaseRule(
        lambda h, n: h * np.pi / n,
        lambda h, k, n: np.sin(h * (2 * k - 1) * np.pi / (2 * n)),
        lambda n: n / 2,
    ),
    ToeplitzTypeCase.MINUS_MINUS: _CaseRule(
        lambda h, n: (h - 1) * np.pi / n,
        lambda h, k, n: np.cos((h - 1) * (2 * k - 1) * np.pi / (2 * n)),
        lambda n: n / 2,
    ),
}


def _require_nondegenerate(T: TriToeplitz) -> None:
    if T.degenerate:
        raise DegenerateCase(
            f"sigma*tau = 0 for {T}; closed-form eigenvectors need sigma*tau != 0"
        )


def _check_index(T: TriToeplitz, h: int) -> int:
    if int(h) != h or not 1 <= h <= T.n:
        raise ValueError(f"eigenvalue index h must lie in 1..{T.n}, got {h!r}")
    return int(h)


def ratio_root(T: TriToeplitz) -> complex:
    """Right-eigenvector ratio r with r**2 == sigma/tau."""
    _require_nondegenerate(T)
    return T.root() / T.tau


def powers(z: complex, n: int) -> np.ndarray:
    """z**k for k = 1..n, evaluated in log-polar form.

    Raises ScaleOverflow if |z|**n exceeds the float64 range.
    """
    z = complex(z)
    if z == 0:
        return np.zeros(n, dtype=complex)
    k = np.arange(1, n + 1)
    log_mod = math.log(abs(z))
    if n * log_mod > LOG_MAX:
        raise ScaleOverflow(
            f"|{z:.6g}|**{n} overflows float64 (log10 = {n * log_mod / math.log(10):.1f})"
        )
    return np.exp(k * log_mod) * np.exp(1j * k * cmath.phase(z))


def _unit_scaled(z: complex, trig: np.ndarray) -> np.ndarray:
    """Unit-norm copy of (z**k * trig_k)_k without forming large powers."""
    k = np.arange(1, trig.size + 1)
    log_mod = k * math.log(abs(z))
    mag = np.exp(log_mod - log_mod.max()) * np.abs(trig)
    phase = np.exp(1j * k * cmath.phase(z)) * np.sign(trig)
    v = mag * phase
    return v / np.linalg.norm(v)


def _sine_factor(h: int, n: int) -> np.ndarray:
    k = np.arange(1, n + 1)
    return np.sin(h * k * np.pi / (n + 1))


def eigenvalues_toeplitz(T: TriToeplitz) -> np.ndarray:
    """delta + 2 sqrt(sigma*tau) cos(h pi/(n+1)) for h = 1..n."""
    h = np.arange(1, T.n + 1)
    if T.degenerate:
        return np.full(T.n, T.delta, dtype=complex)
    return T.delta + 2 * T.root() * np.cos(h * np.pi / (T.n + 1))


def right_eigenvector(T: TriToeplitz, h: int) -> np.ndarray:
    """Unnormalized right eigenvector x_h, x_{h,k} = r**k sin(h k pi/(n+1))."""
    h = _check_index(T, h)
    return powers(ratio_root(T), T.n) * _sine_factor(h, T.n)


def left_eigenvector(T: TriToeplitz, h: int) -> np.ndarray:
    """Unnormalized left eigenvector y_h with y_h^H T = lambda_h y_h^H."""
    h = _check_index(T, h)
    return powers(1 / ratio_root(T).conjugate(), T.n) * _sine_factor(h, T.n)


def unit_right_eigenvector(T: TriToeplitz, h: int) -> np.ndarray:
    h = _check_index(T, h)
    return _unit_scaled(ratio_root(T), _sine_factor(h, T.n))


def unit_left_eigenvector(T: TriToeplitz, h: int) -> np.ndarray:
    h = _check_index(T, h)
    return _unit_scaled(1 / ratio_root(T).conjugate(), _sine_factor(h, T.n))


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def degenerate_eigenvectors(T: TriToeplitz):
    """(right, left) eigenvectors when sigma*tau == 0.

    sigma == 0 gives (e_1, e_n), tau == 0 gives (e_n, e_1), and the diagonal
    case sigma == tau == 0 returns e_1 for both.
    """
    if not T.degenerate:
        raise ValueError("degenerate_eigenvectors needs sigma*tau == 0")
    I = np.eye(T.n, dtype=complex)
    first, last = I[:, 0], I[:, -1]
    if T.sigma == 0 and T.tau != 0:
        return first, last
    if T.tau == 0 and T.sigma != 0:
        return last, first
    return first, first.copy()


def type_corners(T: TriToeplitz, case: ToeplitzTypeCase):
    """(alpha, beta) for a Toeplitz-type case."""
    _require_nondegenerate(T)
    root = T.root()
    return case.alpha_sign * root, case.beta_sign * root


def type_tridiagonal(T: TriToeplitz, case: ToeplitzTypeCase) -> TridiagonalMatrix:
    alpha, beta = type_corners(T, case)
    A = T.to_tridiagonal()
    diag = A.diag.copy()
    diag[0] -= alpha
    diag[-1] -= beta
    return TridiagonalMatrix(A.sub, diag, A.sup)


def type_matrix(T: TriToeplitz, case: ToeplitzTypeCase) -> np.ndarray:
    """Dense Toeplitz-type matrix with first/last diagonal entries shifted."""
    return type_tridiagonal(T, case).to_dense()


def eigenvalues_type(T: TriToeplitz, case: ToeplitzTypeCase) -> np.ndarray:
    _require_nondegenerate(T)
    h = np.arange(1, T.n + 1)
    return T.delta + 2 * T.root() * np.cos(_RULES[case].angle(h, T.n))


def type_factor(case: ToeplitzTypeCase, h: int, n: int) -> np.ndarray:
    """Trigonometric part of the eigenvector of a Toeplitz-type case."""
    k = np.arange(1, n + 1)
    return _RULES[case].factor(h, k, n)


def type_norm_sq(case: ToeplitzTypeCase, n: int) -> float:
    """Sum of squared trigonometric factors, valid away from the edge index."""
    return _RULES[case].norm_sq(n)


def right_eigenvector_type(T: TriToeplitz, case: ToeplitzTypeCase, h: int) -> np.ndarray:
    h = _check_index(T, h)
    return powers(ratio_root(T), T.n) * type_factor(case, h, T.n)


def left_eigenvector_type(T: TriToeplitz, case: ToeplitzTypeCase, h: int) -> np.ndarray:
    h = _check_index(T, h)
    return powers(1 / ratio_root(T).conjugate(), T.n) * type_factor(case, h, T.n)


def eigenvector_matrices(T: TriToeplitz, case: Optional[ToeplitzTypeCase] = None):
    """(X, Y): all unnormalized right and left eigenvectors as columns, h = 1..n."""
    n = T.n
    k = np.arange(1, n + 1)
    if case is None:
        F = np.sin(np.outer(k, k) * np.pi / (n + 1))
    else:
        F = _RULES[case].factor(k[None, :], k[:, None], n)
    r = ratio_root(T)
    return powers(r, n)[:, None] * F, powers(1 / r.conjugate(), n)[:, None] * F


def sine_matrix(n: int) -> np.ndarray:
    """S[k-1, h-1] = sin(h k pi/(n+1)); symmetric with S @ S = (n+1)/2 I."""
    k = np.arange(1, n + 1)
    return np.sin(np.outer(k, k) * np.pi / (n + 1))


@dataclass(frozen=True)
class SpectralFactorization:
    """T = X diag(values) X^{-1} with X = D S, D = diag(r, r**2, ..., r**n).

    ``right`` holds the columns x_h, ``left`` the columns y_h. The inverse of
    X is never formed by a solve: X^{-1} = inv_scale * S D^{-1}.
    """

    values: np.ndarray
    right: np.ndarray
    left: np.ndarray
    inv_scale: float
    ratio_root: complex

    @property
    def n(self) -> int:
        return self.values.size

    def scaling(self) -> np.ndarray:
        return powers(self.ratio_root, self.n)

    def sine(self) -> np.ndarray:
        return sine_matrix(self.n)

    def apply_inverse(self, M) -> np.ndarray:
        """X^{-1} @ M for a vector or matrix M."""
        M = np.asarray(M, dtype=complex)
        d = self.scaling()
        scaled = M / d[:, None] if M.ndim == 2 else M / d
        return self.inv_scale * (self.sine() @ scaled)

    def inverse(self) -> np.ndarray:
        return self.apply_inverse(np.eye(self.n, dtype=complex))


def spectral_factorization(T: TriToeplitz) -> SpectralFactorization:
    r = ratio_root(T)
    S = sine_matrix(T.n)
    X = powers(r, T.n)[:, None] * S
    Y = powers(1 / r.conjugate(), T.n)[:, None] * S
    return SpectralFactorization(
        values=eigenvalues_toeplitz(T),
        right=X,
        left=Y,
        inv_scale=2.0 / (T.n + 1),
        ratio_root=r,
    )


def is_normal(T: TriToeplitz) -> bool:
    """|sigma| == |tau| up to a relative 1e-12."""
    a, b = abs(T.sigma), abs(T.tau)
    return abs(a - b) <= NORMAL_TOL * max(a, b)


def is_normal_type(T: TriToeplitz, case: ToeplitzTypeCase) -> bool:
    if not isinstance(case, ToeplitzTypeCase):
        return False
    return is_normal(T)


def diagonal_balance(T: TriToeplitz):
    """Similarity by diag(1, v, ..., v**(n-1)) giving (n; v sigma, delta, tau/v).

    v = sqrt(|tau|/|sigma|) makes both off-diagonals equal in modulus, so the
    result is normal, and symmetric when sigma and tau share their phase.
    """
    _require_nondegenerate(T)
    v = math.sqrt(abs(T.tau) / abs(T.sigma))
    return v, TriToeplitz(T.n, v * T.sigma, T.delta, T.tau / v)
