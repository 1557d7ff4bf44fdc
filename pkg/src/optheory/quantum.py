"""Hermitian operator bases and channel representations for n-level systems.

Coordinates follow one convention throughout: with a Hermitian basis
``sigma[0] = I`` and ``Tr[sigma_mu sigma_nu] = n delta_mu_nu``, an effect E has
coordinates ``a_mu = Tr[E sigma_mu]`` and a state rho has ``s_mu = Tr[rho sigma_mu] / n``,
so that ``Tr[E rho] = a @ s``.  For n = 2 the basis is (I, X, Y, Z).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import InputError
from .linalg import eigh

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


@lru_cache(maxsize=None)
def _basis(n: int) -> np.ndarray:
    if n == 2:
        return PAULI.copy()
    # generalized Gell-Mann matrices rescaled from Tr = 2 to Tr = n
    mats = [np.eye(n, dtype=complex)]
    c = np.sqrt(n / 2)
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = m[k, j] = 1
            mats.append(c * m)
            m = np.zeros((n, n), dtype=complex)
            m[j, k], m[k, j] = -1j, 1j
            mats.append(c * m)
    for l in range(1, n):
        m = np.zeros((n, n), dtype=complex)
        m[np.arange(l), np.arange(l)] = 1
        m[l, l] = -l
        mats.append(c * np.sqrt(2 / (l * (l + 1))) * m)
    return np.array(mats)


def operator_basis(n: int) -> np.ndarray:
    """Array of shape (n*n, n, n) holding the Hermitian coordinate basis."""
    if n < 1:
        raise InputError(f"Hilbert dimension must be positive, got {n}")
    b = _basis(n)
    b.setflags(write=False)
    return b


def hilbert_dim(d: int) -> int:
    n = int(round(np.sqrt(d)))
    if n * n != d:
        raise InputError(f"effect dimension {d} is not a perfect square")
    return n


def effect_operator(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    n = hilbert_dim(a.shape[-1])
    return np.einsum("m,mij->ij", a, operator_basis(n)) / n


def state_operator(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s)
    n = hilbert_dim(s.shape[-1])
    return np.einsum("m,mij->ij", s, operator_basis(n))


def effect_coords(E: np.ndarray) -> np.ndarray:
    b = operator_basis(E.shape[0])
    return np.real(np.einsum("ij,mji->m", E, b))


def state_coords(rho: np.ndarray) -> np.ndarray:
    n = rho.shape[0]
    return np.real(np.einsum("ij,mji->m", rho, operator_basis(n))) / n


def unit_effect(n: int) -> np.ndarray:
    e = np.zeros(n * n)
    e[0] = n
    return e


def ptm_from_kraus_unchecked(kraus) -> np.ndarray:
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    n = kraus[0].shape[0]
    b = operator_basis(n)
    out = np.zeros((n * n, n * n), dtype=complex)
    for k in kraus:
        # image[nu] = K sigma_nu K^dagger
        image = np.einsum("ij,njk,lk->nil", k, b, k.conj())
        out += np.einsum("mji,nij->mn", b, image)
    return np.real(out) / n


def choi_from_ptm(R: np.ndarray) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) A(|i><j|) of the channel with transfer matrix R."""
    R = np.asarray(R)
    n = hilbert_dim(R.shape[0])
    b = operator_basis(n)
    return np.einsum("mn,nab,mcd->acbd", R, b.transpose(0, 2, 1), b).reshape(n * n, n * n) / n


def ptm_from_choi(J: np.ndarray) -> np.ndarray:
    n = hilbert_dim(J.shape[0])
    b = operator_basis(n)
    J4 = np.asarray(J).reshape(n, n, n, n)
    # A(sigma_nu) = Tr_1[(sigma_nu^T (x) I) J]
    images = np.einsum("nac,abcd->nbd", b, J4)
    return np.real(np.einsum("mdc,ncd->mn", b, images)) / n


def is_psd(m: np.ndarray, tol: float) -> tuple[bool, float]:
    w, _ = eigh(m)
    lo = float(w[0]) if w.size else 0.0
    return lo >= -tol, max(0.0, -lo)
