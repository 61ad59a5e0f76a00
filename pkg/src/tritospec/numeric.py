"""Dense complex linear-algebra kernels for small matrices.

Householder QR (plain and column-pivoted), Hessenberg reduction, the implicitly
shifted complex QR algorithm, inverse iteration and one-sided Jacobi SVD.
numpy provides array storage and elementwise arithmetic only; none of the
factorizations call into LAPACK.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class TridiagonalMatrix:
    """General complex tridiagonal matrix stored by its three diagonals."""

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        diag = np.atleast_1d(np.asarray(self.diag, dtype=complex))
        sub = np.atleast_1d(np.asarray(self.sub, dtype=complex))
        sup = np.atleast_1d(np.asarray(self.sup, dtype=complex))
        if diag.size < 1:
            raise ValueError("tridiagonal matrix needs n >= 1")
        if sub.size != diag.size - 1 or sup.size != diag.size - 1:
            raise ValueError(
                f"off-diagonals must have length {diag.size - 1}, "
                f"got {sub.size} and {sup.size}"
            )
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "sup", sup)

    @property
    def n(self) -> int:
        return self.diag.size

    @classmethod
    def from_dense(cls, A) -> TridiagonalMatrix:
        A = np.asarray(A, dtype=complex)
        return cls(np.diag(A, -1), np.diag(A), np.diag(A, 1))

    def to_dense(self) -> np.ndarray:
        A = np.diag(self.diag)
        if self.n > 1:
            A += np.diag(self.sub, -1) + np.diag(self.sup, 1)
        return A

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        out = self.diag * v
        out[1:] += self.sub * v[:-1]
        out[:-1] += self.sup * v[1:]
        return out

    def is_real_symmetric(self, tol: float = 0.0) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.to_dense()))))
        imag = max(
            float(np.max(np.abs(self.diag.imag), initial=0.0)),
            float(np.max(np.abs(self.sub.imag), initial=0.0)),
            float(np.max(np.abs(self.sup.imag), initial=0.0)),
        )
        asym = float(np.max(np.abs(self.sub - self.sup), initial=0.0))
        return imag <= tol * scale and asym <= tol * scale


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues with unit right eigenvectors stored as matrix columns."""

    values: np.ndarray
    vectors: np.ndarray
    tol: float = 1e-10

    def residuals(self, A) -> np.ndarray:
        A = np.asarray(A, dtype=complex)
        R = A @ self.vectors - self.vectors * self.values
        return np.linalg.norm(R, axis=0)

    def satisfies(self, A) -> bool:
        return bool(np.all(self.residuals(A) <= self.tol * fro(A)))


def fro(A) -> float:
    return float(np.linalg.norm(np.asarray(A)))


def _reflector(x: np.ndarray):
    """Householder data (v, beta, alpha) with (I - beta v v^H) x = alpha e_1.

    Returns ``v = None`` when x is already a multiple of e_1, so no reflection
    is applied and exact structure (identity, Hessenberg input) is preserved.
    """
    tail = np.linalg.norm(x[1:])
    if tail == 0.0:
        return None, 0.0, x[0]
    x0 = x[0]
    nx = math.hypot(abs(x0), tail)
    phase = x0 / abs(x0) if x0 != 0 else 1.0
    alpha = -phase * nx
    v = x.astype(complex, copy=True)
    v[0] = x0 - alpha
    beta = 2.0 / np.vdot(v, v).real
    return v, beta, alpha


def _householder(M, pivoting: bool):
    R = np.array(M, dtype=complex)
    m, n = R.shape
    if m < n:
        raise ValueError("householder_qr needs rows >= cols")
    perm = np.arange(n)
    reflectors = []
    for k in range(n):
        if pivoting:
            norms = np.linalg.norm(R[k:, k:], axis=0)
            j = k + int(np.argmax(norms))
            if j != k:
                R[:, [k, j]] = R[:, [j, k]]
                perm[[k, j]] = perm[[j, k]]
        v, beta, alpha = _reflector(R[k:, k])
        if v is None:
            reflectors.append(None)
            continue
        R[k:, k:] -= beta * np.outer(v, v.conj() @ R[k:, k:])
        R[k + 1:, k] = 0.0
        R[k, k] = alpha
        reflectors.append((k, v, beta))
    Q = np.eye(m, dtype=complex)
    for item in reversed(reflectors):
        if item is None:
            continue
        k, v, beta = item
        Q[k:, :] -= beta * np.outer(v, v.conj() @ Q[k:, :])
    return Q, np.triu(R), perm


def householder_qr(M):
    """Thin QR factorization ``M = Q R`` of an m-by-n matrix with m >= n.

    Q is m-by-n with orthonormal columns, R is n-by-n upper triangular. Rank
    deficiency is allowed and shows up as zero diagonal entries of R.
    """
    Q, R, _ = _householder(M, pivoting=False)
    n = R.shape[1]
    return Q[:, :n], R[:n, :]


def householder_qr_pivoted(M):
    """Column-pivoted QR, ``M[:, perm] = Q R`` with a full unitary Q."""
    Q, R, perm = _householder(M, pivoting=True)
    return Q, R[: R.shape[1], :], perm


def hessenberg(M):
    """Unitary reduction ``U^H M U = H`` to upper Hessenberg form."""
    H = np.array(M, dtype=complex)
    n, m = H.shape
    if n != m:
        raise ValueError("hessenberg needs a square matrix")
    U = np.eye(n, dtype=complex)
    for k in range(n - 2):
        v, beta, alpha = _reflector(H[k + 1:, k])
        if v is None:
            continue
        H[k + 1:, k:] -= beta * np.outer(v, v.conj() @ H[k + 1:, k:])
        H[:, k + 1:] -= beta * np.outer(H[:, k + 1:] @ v, v.conj())
        H[k + 2:, k] = 0.0
        H[k + 1, k] = alpha
        U[:, k + 1:] -= beta * np.outer(U[:, k + 1:] @ v, v.conj())
    return H, U


def _givens(x: complex, y: complex):
    """(c, s) with [[c, s], [-conj(s), c]] @ [x, y] = [r, 0]."""
    if y == 0:
        return 1.0, 0.0
    ax = abs(x)
    if ax == 0:
        return 0.0, 1.0
    r = math.hypot(ax, abs(y))
    return ax / r, (x / ax) * y.conjugate() / r


def _wilkinson_shift(a, b, c, d):
    """Eigenvalue of [[a, b], [c, d]] closer to d."""
    half = 0.5 * (a - d)
    disc = np.sqrt(half * half + b * c)
    # pick the sign that avoids cancellation in half +/- disc
    if abs(half + disc) < abs(half - disc):
        disc = -disc
    denom = half + disc
    if denom == 0:
        return d
    return d - b * c / denom


def qr_eigenvalues(M, max_iter_factor: int = 100) -> np.ndarray:
    """All eigenvalues of a square matrix, with multiplicity.

    Hessenberg reduction followed by implicitly shifted complex QR with
    Wilkinson shifts. A subdiagonal entry is set to zero once it drops below
    1e-14 times the sum of its diagonal neighbours. An exceptional shift is
    used every 20 iterations without deflation.

    Raises
    ------
    NonConvergence
        if an eigenvalue needs more than ``max_iter_factor * n`` iterations.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if M.shape != (n, n) or n < 1:
        raise ValueError("qr_eigenvalues needs a non-empty square matrix")
    H, _ = hessenberg(M)
    values = np.zeros(n, dtype=complex)
    hi = n - 1
    its = 0
    limit = max_iter_factor * n
    norm_scale = fro(H) or 1.0
    while hi >= 0:
        if hi == 0:
            values[0] = H[0, 0]
            break
        lo = hi
        while lo > 0:
            s = abs(H[lo - 1, lo - 1]) + abs(H[lo, lo])
            if s == 0.0:
                s = norm_scale
            if abs(H[lo, lo - 1]) <= 1e-14 * s:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            values[hi] = H[hi, hi]
            hi -= 1
            its = 0
            continue
        its += 1
        if its > limit:
            raise NonConvergence(
                f"QR iteration exceeded {limit} iterations at index {hi}"
            )
        if its % 20 == 0:
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1]) * (1.0 + 0.5j)
        else:
            mu = _wilkinson_shift(
                H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi]
            )
        x = H[lo, lo] - mu
        y = H[lo + 1, lo]
        for k in range(lo, hi):
            c, s = _givens(x, y)
            col0 = max(lo, k - 1)
            rk = H[k, col0:hi + 1].copy()
            rk1 = H[k + 1, col0:hi + 1]
            H[k, col0:hi + 1] = c * rk + s * rk1
            H[k + 1, col0:hi + 1] = -np.conj(s) * rk + c * rk1
            row1 = min(k + 2, hi)
            ck = H[lo:row1 + 1, k].copy()
            ck1 = H[lo:row1 + 1, k + 1]
            H[lo:row1 + 1, k] = c * ck + np.conj(s) * ck1
            H[lo:row1 + 1, k + 1] = -s * ck + c * ck1
            if k < hi - 1:
                x = H[k + 1, k]
                y = H[k + 2, k]
    return values


def _lu(A: np.ndarray):
    """LU with partial pivoting; zero pivots are replaced by a tiny value."""
    LU = np.array(A, dtype=complex)
    n = LU.shape[0]
    piv = np.arange(n)
    tiny = EPS * max(fro(A), np.finfo(float).tiny)
    for k in range(n):
        p = k + int(np.argmax(np.abs(LU[k:, k])))
        if p != k:
            LU[[k, p]] = LU[[p, k]]
            piv[[k, p]] = piv[[p, k]]
        if abs(LU[k, k]) < tiny:
            LU[k, k] = tiny
        if k + 1 < n:
            LU[k + 1:, k] /= LU[k, k]
            LU[k + 1:, k + 1:] -= np.outer(LU[k + 1:, k], LU[k, k + 1:])
    return LU, piv


def _lu_solve(LU: np.ndarray, piv: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = LU.shape[0]
    x = np.asarray(b, dtype=complex)[piv].copy()
    for k in range(1, n):
        x[k] -= LU[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - LU[k, k + 1:] @ x[k + 1:]) / LU[k, k]
    return x


def inverse_iteration(
    M,
    shift: complex,
    start=None,
    seed: int = 0,
    tol: float = 1e-10,
    max_iter: int = 50,
    restarts: int = 3,
) -> np.ndarray:
    """Unit eigenvector for the eigenvalue of M closest to ``shift``.

    Converged once ``||M v - mu v|| <= tol * ||M||_F`` with ``mu = v^H M v``.
    A nearly singular shifted matrix is expected and handled by pivot
    replacement inside the LU. On stagnation the iteration restarts from a
    random vector drawn from ``numpy.random.default_rng(seed + attempt)``.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    norm_m = fro(M)
    if n == 1 or norm_m == 0.0:
        return np.eye(n, 1, dtype=complex)[:, 0]
    target = tol * norm_m
    LU, piv = _lu(M - shift * np.eye(n))
    if start is None:
        v = np.ones(n, dtype=complex)
    else:
        v = np.asarray(start, dtype=complex).copy()
    best = None
    best_res = math.inf
    for attempt in range(restarts + 1):
        if attempt > 0:
            rng = np.random.default_rng(seed + attempt)
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = v / np.linalg.norm(v)
        window = []
        for _ in range(max_iter):
            w = _lu_solve(LU, piv, v)
            nw = np.linalg.norm(w)
            if not np.isfinite(nw) or nw == 0.0:
                break
            v = w / nw
            Mv = M @ v
            mu = np.vdot(v, Mv)
            res = float(np.linalg.norm(Mv - mu * v))
            if res < best_res:
                best, best_res = v, res
            if res <= target:
                return v
            window.append(res)
            if len(window) >= 6 and window[-1] > 0.5 * window[-6]:
                break
    raise NonConvergence(
        f"inverse iteration stalled at residual {best_res:.3e} "
        f"(target {target:.3e}) after {restarts} restarts"
    )


def eig(M, tol: float = 1e-10, seed: int = 0) -> EigenDecomposition:
    """Eigenvalues by shifted QR and eigenvectors by inverse iteration."""
    M = np.asarray(M, dtype=complex)
    values = qr_eigenvalues(M)
    n = values.size
    vectors = np.empty((n, n), dtype=complex)
    for h, lam in enumerate(values):
        vectors[:, h] = inverse_iteration(M, lam, seed=seed + h, tol=tol)
    return EigenDecomposition(values, vectors, tol)


def singular_values(M, max_sweeps: int = 30) -> np.ndarray:
    """Singular values by one-sided (Hestenes) Jacobi, in decreasing order.

    A pair of columns counts as converged once the cosine of the angle between
    them is below 1e-15 or the rotation tangent is below 1e-14; sweeps stop
    when a whole sweep performs no rotation.
    """
    A = np.array(M, dtype=complex)
    if A.ndim != 2:
        raise ValueError("singular_values needs a matrix")
    if A.shape[0] < A.shape[1]:
        A = A.conj().T.copy()
    m, n = A.shape
    if n == 0:
        return np.zeros(0)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                ap = A[:, p].copy()
                aq = A[:, q].copy()
                alpha = np.vdot(ap, ap).real
                beta = np.vdot(aq, aq).real
                gamma = np.vdot(ap, aq)
                g = abs(gamma)
                if g <= 1e-15 * math.sqrt(alpha * beta) or g <= 1e-300:
                    continue
                zeta = (beta - alpha) / (2.0 * g)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                if abs(t) < 1e-14:
                    continue
                rotated = True
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                phase = gamma / g
                bq = aq / phase
                A[:, p] = c * ap - s * bq
                A[:, q] = (s * ap + c * bq) * phase
        if not rotated:
            return np.sort(np.linalg.norm(A, axis=0))[::-1]
    raise NonConvergence(f"one-sided Jacobi did not converge in {max_sweeps} sweeps")


def smallest_singular_value(M) -> float:
    """sigma_min of a square matrix via one-sided Jacobi."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("smallest_singular_value needs a square matrix")
    if M.shape[0] == 0:
        return math.inf
    return float(np.min(singular_values(M)))
