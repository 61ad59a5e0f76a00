"""Monte-Carlo and finite-difference checks of the perturbation bounds.

Every check compares a closed-form quantity against a direct dense
computation on ``A + eps E`` with ``||E||_F = 1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .conditioning import eigvec_condition_general, eigvec_condition_normal, global_min_gap_toeplitz
from .errors import AmbiguousMatch
from .numeric import EigenDecomposition, eig
from .structured import Subspace
from .toeplitz import (
    ToeplitzTypeCase,
    TriToeplitz,
    _check_index,
    eigenvalues_toeplitz,
    eigenvalues_type,
    is_normal,
    normalize,
    right_eigenvector_type,
    type_matrix,
    unit_right_eigenvector,
)

MATCH_FLOOR = 1 / math.sqrt(2)
# residual target for the dense solver; mid-spectrum bounds can be ~1e-7
SOLVER_TOL = 1e-13

Target = Union[TriToeplitz, tuple]


@dataclass(frozen=True)
class PerturbationSample:
    E: np.ndarray
    subspace: Subspace
    seed: int


@dataclass(frozen=True)
class BoundCheck:
    h: int
    measured: float
    bound: float
    passed: bool

    @property
    def ratio(self) -> float:
        if self.bound == 0.0:
            return 0.0 if self.measured == 0.0 else math.inf
        return self.measured / self.bound


def sample_perturbation(n: int, subspace="general", seed: int = 0) -> PerturbationSample:
    """Unit-Frobenius random perturbation lying exactly in the tagged subspace.

    Structured samples are drawn in parameter space (three complex numbers
    for T, two reals for ST and AT) and then embedded.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    s = Subspace.parse(subspace) or Subspace.GENERAL
    rng = np.random.default_rng(seed)
    if s is Subspace.GENERAL:
        E = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    elif s is Subspace.T:
        sigma, delta, tau = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        E = TriToeplitz(n, sigma, delta, tau).to_dense()
    else:
        sigma, delta = rng.standard_normal(2)
        tau = sigma if s is Subspace.ST else -sigma
        E = TriToeplitz(n, sigma, delta, tau).to_dense()
    return PerturbationSample(E / np.linalg.norm(E), s, seed)


def match_continuation(F: EigenDecomposition, F_eps: EigenDecomposition) -> np.ndarray:
    """Greedy maximum-overlap pairing; ``p[h]`` is the column of F_eps matched to column h of F."""
    X = np.asarray(F.vectors)
    Xe = np.asarray(F_eps.vectors)
    if X.shape != Xe.shape:
        raise ValueError("decompositions must have the same order")
    n = X.shape[1]
    Xn = X / np.linalg.norm(X, axis=0)
    Xen = Xe / np.linalg.norm(Xe, axis=0)
    overlap = np.abs(Xn.conj().T @ Xen)
    pairing = np.full(n, -1)
    taken = np.zeros(n, dtype=bool)
    order = np.argsort(-overlap, axis=None, kind="stable")
    for flat in order:
        h, j = divmod(int(flat), n)
        if pairing[h] >= 0 or taken[j]:
            continue
        pairing[h] = j
        taken[j] = True
    worst = overlap[np.arange(n), pairing].min()
    if worst < MATCH_FLOOR:
        raise AmbiguousMatch(
            f"best overlap {worst:.3f} < 1/sqrt(2); the perturbation is too large to track"
        )
    return pairing


def _unpack(target: Target):
    if isinstance(target, TriToeplitz):
        return target, None
    T, case = target
    if case is not None and not isinstance(case, ToeplitzTypeCase):
        case = ToeplitzTypeCase.parse(case)
    return T, case


def closed_form_decomposition(target: Target) -> EigenDecomposition:
    """Exact eigenvalues and unit right eigenvectors of a Toeplitz or Toeplitz-type matrix."""
    T, case = _unpack(target)
    n = T.n
    if case is None:
        values = eigenvalues_toeplitz(T)
        cols = [unit_right_eigenvector(T, h) for h in range(1, n + 1)]
    else:
        values = eigenvalues_type(T, case)
        cols = [normalize(right_eigenvector_type(T, case, h)) for h in range(1, n + 1)]
    return EigenDecomposition(np.asarray(values, dtype=complex), np.column_stack(cols))


def _dense(target: Target) -> np.ndarray:
    T, case = _unpack(target)
    return T.to_dense() if case is None else type_matrix(T, case)


def eigvec_condition(target: Target, h: int) -> float:
    """kappa(x_h): 1/gap for normal matrices, the deflated-operator value otherwise."""
    T, case = _unpack(target)
    h = _check_index(T, h)
    if T.n == 1:
        return 0.0
    if is_normal(T):
        return eigvec_condition_normal(T, h, case)
    lam = closed_form_decomposition(target).values[h - 1]
    return eigvec_condition_general(_dense(target), lam)


def sin_angle(x, z) -> float:
    """Sine of the angle between two vectors, via the orthogonal component."""
    x = normalize(x)
    z = normalize(z)
    return float(np.linalg.norm(z - np.vdot(x, z) * x))


def perturbed_decomposition(target: Target, E, eps: float, seed: int = 0):
    """(F, F_eps, pairing) for A and A + eps E."""
    F = closed_form_decomposition(target)
    A_eps = _dense(target) + eps * np.asarray(E, dtype=complex)
    F_eps = eig(A_eps, tol=SOLVER_TOL, seed=seed)
    return F, F_eps, match_continuation(F, F_eps)


def verify_sin_theta(
    target: Target, E, eps: float, h: int, kappa: Optional[float] = None, seed: int = 0
) -> BoundCheck:
    """Check sin(theta) <= kappa(x_h) * eps for one eigenvector."""
    T, _ = _unpack(target)
    h = _check_index(T, h)
    if kappa is None:
        kappa = eigvec_condition(target, h)
    bound = kappa * eps
    if eps == 0.0:
        return BoundCheck(h, 0.0, bound, True)
    F, F_eps, p = perturbed_decomposition(target, E, eps, seed)
    measured = sin_angle(F.vectors[:, h - 1], F_eps.vectors[:, p[h - 1]])
    return BoundCheck(h, measured, bound, measured <= bound * (1 + 1e-9))


def verify_all(target: Target, E, eps: float, seed: int = 0) -> list[BoundCheck]:
    """verify_sin_theta for every h, sharing one dense solve."""
    T, _ = _unpack(target)
    n = T.n
    kappas = [eigvec_condition(target, h) for h in range(1, n + 1)]
    if eps == 0.0:
        return [BoundCheck(h, 0.0, 0.0, True) for h in range(1, n + 1)]
    F, F_eps, p = perturbed_decomposition(target, E, eps, seed)
    out = []
    for h in range(1, n + 1):
        measured = sin_angle(F.vectors[:, h - 1], F_eps.vectors[:, p[h - 1]])
        bound = kappas[h - 1] * eps
        out.append(BoundCheck(h, measured, bound, measured <= bound * (1 + 1e-9)))
    return out


def fd_eigenvalue_slope(target: Target, E, h: int, t: Optional[float] = None, seed: int = 0) -> float:
    """|lambda_h(A + tE) - lambda_h(A)| / t with continuation matching."""
    T, _ = _unpack(target)
    h = _check_index(T, h)
    if t is None:
        t = 1e-6 * T.fro()
    if t <= 0:
        raise ValueError("t must be positive")
    F, F_eps, p = perturbed_decomposition(target, E, t, seed)
    return abs(F_eps.values[p[h - 1]] - F.values[h - 1]) / t


def random_normal_toeplitz(n: int, seed: int) -> TriToeplitz:
    """Normal T with |sigma| = |tau| = 1, random phases and a random complex diagonal."""
    rng = np.random.default_rng(seed)
    a, b = rng.uniform(0, 2 * math.pi, 2)
    d = complex(*rng.standard_normal(2))
    return TriToeplitz(n, cmath.exp(1j * a), d, cmath.exp(1j * b))


@dataclass
class SuiteReport:
    subspace: str
    eps_factor: float
    total: int = 0
    passed: int = 0
    worst_ratio: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def pass_rate(self) -> float:
        return self.passed / self.total if self.total else 1.0

    def as_dict(self) -> dict:
        return {
            "subspace": self.subspace,
            "eps_factor": self.eps_factor,
            "total": self.total,
            "passed": self.passed,
            "pass_rate": self.pass_rate,
            "worst_ratio": self.worst_ratio,
            "failures": self.failures,
        }


def run_bound_suite(
    ns: Sequence[int] = (5, 10, 25, 50),
    seeds: Union[int, Sequence[int]] = 400,
    subspace="general",
    eps_factor: float = 1e-6,
    target: Optional[Target] = None,
    eps: Optional[float] = None,
) -> SuiteReport:
    """Eigenvector-angle bound suite.

    Without ``target`` each (n, seed) draws a random normal T. The step is
    ``eps`` when given, otherwise ``eps_factor`` times the global minimum gap.
    """
    seed_list = range(seeds) if isinstance(seeds, int) else list(seeds)
    s = Subspace.parse(subspace) or Subspace.GENERAL
    report = SuiteReport(s.value, eps_factor)
    sizes = [target[0].n if isinstance(target, tuple) else target.n] if target is not None else ns
    for n in sizes:
        for seed in seed_list:
            tgt = target if target is not None else random_normal_toeplitz(n, seed)
            T, _ = _unpack(tgt)
            step = eps if eps is not None else eps_factor * global_min_gap_toeplitz(T)
            E = sample_perturbation(n, s, seed).E
            for chk in verify_all(tgt, E, step, seed):
                report.total += 1
                report.passed += chk.passed
                report.worst_ratio = max(report.worst_ratio, chk.ratio)
                if not chk.passed:
                    report.failures.append(
                        {"n": n, "seed": seed, "h": chk.h, "measured": chk.measured, "bound": chk.bound}
                    )
    return report
