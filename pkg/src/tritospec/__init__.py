"""Closed-form spectra, conditioning and structured perturbation theory for
tridiagonal Toeplitz and Toeplitz-type matrices."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AmbiguousMatch,
    DegenerateCase,
    LengthMismatch,
    NonConvergence,
    NotHermitian,
    NotNormal,
    NotSymmetric,
    NotTraceless,
    RankDeficient,
    ScaleOverflow,
    SubspaceMismatch,
    TritospecError,
    ZeroProjection,
)
from .numeric import EigenDecomposition, TridiagonalMatrix, eig, qr_eigenvalues  # noqa: E402
from .toeplitz import (  # noqa: E402
    ToeplitzTypeCase,
    TriToeplitz,
    eigenvalues_toeplitz,
    eigenvalues_type,
    spectral_factorization,
)
from .conditioning import (  # noqa: E402
    eig_condition_toeplitz,
    eig_condition_type,
    eigvec_condition_general,
    min_gap_toeplitz,
    min_gap_type,
)
from .structured import Subspace, structured_eig_condition, structured_pseudospectrum  # noqa: E402
from .applications import nearest_toeplitz, refine_spectral_factorization  # noqa: E402

__all__ = [
    "AmbiguousMatch", "DegenerateCase", "EigenDecomposition", "LengthMismatch",
    "NonConvergence", "NotHermitian", "NotNormal", "NotSymmetric", "NotTraceless",
    "RankDeficient", "ScaleOverflow", "Subspace", "SubspaceMismatch", "ToeplitzTypeCase",
    "TriToeplitz", "TridiagonalMatrix", "TritospecError", "ZeroProjection", "eig",
    "eig_condition_toeplitz", "eig_condition_type", "eigenvalues_toeplitz",
    "eigenvalues_type", "eigvec_condition_general", "min_gap_toeplitz", "min_gap_type",
    "nearest_toeplitz", "qr_eigenvalues", "refine_spectral_factorization",
    "spectral_factorization", "structured_eig_condition", "structured_pseudospectrum",
]
