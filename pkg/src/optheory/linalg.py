"""Small numeric kernels shared by the bipartite and GNS modules.

All spectral work goes through ``numpy.linalg.eigh`` (LAPACK ``*heevd``), which
is deterministic for a fixed input and BLAS build.  Eigenvalues whose magnitude
falls below ``EIG_FLOOR * scale`` are treated as exact zeros.
"""

from __future__ import annotations

import numpy as np

from .errors import FaithfulnessError

EIG_FLOOR = 1e-14


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of the Hermitian part of ``m`` with ascending eigenvalues.

    Values with ``|w| < EIG_FLOOR * max|w|`` are set to zero so that downstream
    rank decisions do not depend on rounding noise.
    """
    w, v = np.linalg.eigh(hermitian_part(np.asarray(m)))
    scale = np.max(np.abs(w)) if w.size else 0.0
    w = np.where(np.abs(w) < EIG_FLOOR * scale, 0.0, w)
    return w, v


def numerical_rank(m: np.ndarray, tol: float) -> tuple[int, np.ndarray]:
    """Rank counting singular values above ``tol * sigma_max``."""
    sv = np.linalg.svd(np.asarray(m), compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0, sv
    return int(np.sum(sv > tol * sv[0])), sv


def invert_form(F: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Inverse of a bipartite form matrix, refusing near-singular input."""
    F = np.asarray(F, dtype=float)
    u, sv, vt = np.linalg.svd(F)
    if sv.size == 0 or sv[0] == 0.0 or sv[-1] <= tol * sv[0]:
        raise FaithfulnessError(
            f"form is not dynamically faithful: singular values {sv.tolist()}"
        )
    return (vt.T / sv) @ u.T


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = eigh(m)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def max_abs(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0
