"""Involution, adjoint, GNS space and representation of the transformation algebra.

Elements of the complexified algebra are complex ``d x d`` right-action
matrices.  The GNS space is built over the ``d^2`` matrix units, so the
coefficient vector of an element ``X`` is simply ``X.ravel()`` (row-major).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import null_space

from .bipartite import find_preparing_transformation, local_state, transpose
from .errors import FaithfulnessError, PositivityError
from .linalg import eigh, hermitian_part, invert_form
from .theory import DEFAULT_TOL, Theory

NULL_FACTOR = 1e-10
PSD_FACTOR = 1e-9


@dataclass(frozen=True)
class SignInvolution:
    S: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def abs_form(self) -> np.ndarray:
        """Matrix of ``|Phi|(a, b) = Phi(a S, b)``, i.e. ``S @ F``."""
        v, w = self.eigenvectors, self.eigenvalues
        return (v * np.abs(w)) @ v.T


def sign_involution(F: np.ndarray, tol: float = DEFAULT_TOL) -> SignInvolution:
    """``S = P_+ - P_-`` from the symmetric eigendecomposition of ``F``.

    Acts on effects from the right, ``a -> a @ S``.  Raises
    :class:`FaithfulnessError` when an eigenvalue is below ``tol * max|lambda|``.
    """
    F = np.asarray(F, dtype=float)
    w, v = eigh(F)
    top = np.max(np.abs(w))
    if top == 0.0 or np.min(np.abs(w)) < tol * top:
        raise FaithfulnessError(f"form has a (near) zero eigenvalue: {w.tolist()}")
    S = (v * np.sign(w)) @ v.T
    S = 0.5 * (S + S.T)
    S[np.abs(S) < 1e-15] = 0.0
    return SignInvolution(S, w, v)


def conjugate_transformation(A: np.ndarray, S: np.ndarray) -> np.ndarray:
    """Composition-preserving extension of the involution: ``S @ conj(A) @ S``."""
    return S @ np.conj(A) @ S


def adjoint(A: np.ndarray, F: np.ndarray, S: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Adjoint as conjugation of the transposed: ``S @ (F @ A^H @ inv(F)) @ S`` for symmetric F."""
    return conjugate_transformation(transpose(A, F, tol), S)


def matrix_units(d: int) -> list[np.ndarray]:
    units = []
    for k in range(d * d):
        m = np.zeros(d * d, dtype=complex)
        m[k] = 1.0
        units.append(m.reshape(d, d))
    return units


def gram_matrix(
    basis: Sequence[np.ndarray], F: np.ndarray, S: np.ndarray, unit_effect: np.ndarray, tol: float = DEFAULT_TOL
) -> np.ndarray:
    """``G[i, j] = phi(B_i^dagger o B_j)`` with ``phi`` the marginal of ``F``.

    Evaluated literally: adjoint, composition, effect, then the local state.
    """
    phi = local_state(F, unit_effect, 1)
    left = np.array([unit_effect @ adjoint(b, F, S, tol) for b in basis])
    right = np.array([b @ phi for b in basis]).T
    return left @ right


@dataclass(frozen=True)
class Quotient:
    coords: np.ndarray  # (dim_H, N): coefficient vector -> orthonormal coordinates
    lift: np.ndarray  # (N, dim_H): right inverse of coords
    null_vectors: np.ndarray  # (N, N - dim_H), orthonormal in coefficient space
    eigenvalues: np.ndarray
    dim: int


def null_space_quotient(G: np.ndarray, null_factor: float = NULL_FACTOR, psd_factor: float = PSD_FACTOR) -> Quotient:
    """Quotient of the coefficient space by the zero-norm directions of ``G``.

    Eigenvalues below ``null_factor * lambda_max`` are null; an eigenvalue below
    ``-psd_factor * lambda_max`` raises :class:`PositivityError`.
    """
    w, v = eigh(G)
    top = float(w[-1]) if w.size else 0.0
    if top <= 0.0:
        raise PositivityError(f"Gram matrix has no positive eigenvalue (max {top})")
    if w[0] < -psd_factor * top:
        raise PositivityError(f"Gram matrix eigenvalue {w[0]:.3e} below -{psd_factor} * {top:.3e}")
    keep = w > null_factor * top
    root = np.sqrt(w[keep])
    vk = v[:, keep]
    return Quotient(
        coords=(vk.conj().T) * root[:, None],
        lift=vk / root,
        null_vectors=v[:, ~keep],
        eigenvalues=w,
        dim=int(keep.sum()),
    )


@dataclass(frozen=True)
class GnsSpace:
    F: np.ndarray
    S: np.ndarray
    unit_effect: np.ndarray
    phi: np.ndarray
    gram: np.ndarray
    quotient: Quotient
    tol: float

    @property
    def effect_dim(self) -> int:
        return self.F.shape[0]

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def vector(self, X: np.ndarray) -> np.ndarray:
        """Orthonormal coordinates of the class of ``X``."""
        return self.quotient.coords @ np.asarray(X, dtype=complex).ravel()

    def inner(self, X: np.ndarray, Y: np.ndarray) -> complex:
        return complex(np.vdot(self.vector(X), self.vector(Y)))

    def adjoint(self, A: np.ndarray) -> np.ndarray:
        return adjoint(A, self.F, self.S, self.tol)


def build_gns(
    F: np.ndarray,
    unit_effect: np.ndarray,
    tol: float = DEFAULT_TOL,
    null_factor: float = NULL_FACTOR,
    psd_factor: float = PSD_FACTOR,
) -> GnsSpace:
    F = np.asarray(F, dtype=float)
    invert_form(F, tol)  # faithfulness precondition
    S = sign_involution(F, tol).S
    d = F.shape[0]
    G = gram_matrix(matrix_units(d), F, S, unit_effect, tol)
    q = null_space_quotient(G, null_factor, psd_factor)
    return GnsSpace(F, S, np.asarray(unit_effect, dtype=float), local_state(F, unit_effect, 1), G, q, tol)


def representation(A: np.ndarray, space: GnsSpace) -> np.ndarray:
    """Matrix of ``X -> A o X`` on the quotient, in orthonormal coordinates."""
    d = space.effect_dim
    left = np.kron(np.asarray(A, dtype=complex), np.eye(d))
    return space.quotient.coords @ left @ space.quotient.lift


def operator_norm(A: np.ndarray, space: GnsSpace) -> float:
    """Largest singular value of the representation, via ``eigvalsh(pi^H pi)``."""
    p = representation(A, space)
    top = np.linalg.eigvalsh(hermitian_part(p.conj().T @ p))[-1]
    return float(np.sqrt(max(top, 0.0)))


def cstar_check(A: np.ndarray, space: GnsSpace) -> float:
    """Relative residual ``| ||A^dagger o A|| - ||A||^2 | / max(1, ||A||^2)``."""
    na = operator_norm(A, space)
    nn = operator_norm(space.adjoint(A) @ A, space)
    return abs(nn - na * na) / max(1.0, na * na)


def cauchy_schwarz_check(A: np.ndarray, B: np.ndarray, space: GnsSpace, tol: float = 1e-10) -> bool:
    lhs = abs(space.inner(A, B))
    rhs = np.sqrt(max(space.inner(A, A).real, 0.0)) * np.sqrt(max(space.inner(B, B).real, 0.0))
    return bool(lhs <= rhs + tol)


def left_ideal_residual(space: GnsSpace, generators: Sequence[np.ndarray]) -> float:
    """Max of ``<A o X | A o X> / lambda_max`` over null vectors X and generators A."""
    nulls = space.quotient.null_vectors
    if nulls.shape[1] == 0:
        return 0.0
    G = hermitian_part(space.gram)
    top = float(space.quotient.eigenvalues[-1])
    d = space.effect_dim
    worst = 0.0
    for A in generators:
        moved = np.kron(np.asarray(A, dtype=complex), np.eye(d)) @ nulls
        norms = np.real(np.einsum("ik,ij,jk->k", moved.conj(), G, moved))
        worst = max(worst, float(np.max(np.abs(norms))) / top)
    return worst


def class_dependence(space: GnsSpace, constraints: np.ndarray) -> tuple[float, int]:
    """How much the scalar product sees directions in ``ker(constraints)``.

    Returns ``||G N||_2 / lambda_max`` for an orthonormal basis N of the kernel,
    and the number of kernel directions carrying nonzero norm.
    """
    N = null_space(constraints)
    if N.shape[1] == 0:
        return 0.0, 0
    G = hermitian_part(space.gram)
    top = float(space.quotient.eigenvalues[-1])
    dep = float(np.linalg.norm(G @ N, 2)) / top
    w = np.linalg.eigvalsh(hermitian_part(N.conj().T @ G @ N))
    return dep, int(np.sum(w > NULL_FACTOR * top))


def effect_constraints(space: GnsSpace) -> np.ndarray:
    """Rows of ``X -> e @ X`` acting on row-major coefficient vectors."""
    d = space.effect_dim
    return np.kron(space.unit_effect[None, :], np.eye(d))


def transposed_effect_constraints(space: GnsSpace) -> np.ndarray:
    """Rows of ``X -> X @ phi``; its kernel is the kernel of ``X -> e @ X'``."""
    d = space.effect_dim
    return np.kron(np.eye(d), space.phi[None, :])


def effect_level_product(A: np.ndarray, B: np.ndarray, space: GnsSpace) -> complex:
    """``Phi(S(a'), b')`` with ``a'``, ``b'`` the effects of the transposed elements."""
    e = space.unit_effect
    a = e @ transpose(A, space.F, space.tol)
    b = e @ transpose(B, space.F, space.tol)
    return complex(np.conj(a) @ space.S @ space.F @ b)


# ---------------------------------------------------------------------------
# Born rule


@dataclass(frozen=True)
class BornState:
    rho: np.ndarray  # quotient coordinates
    T: np.ndarray
    probability: float


def born_state(omega: np.ndarray, theory: Theory, space: GnsSpace) -> BornState:
    """GNS vector of ``omega``: class of ``T'`` divided by ``Phi(e o T, e)``.

    ``T`` is the local filter on the other half of the form that prepares
    ``omega`` (see :func:`~optheory.bipartite.find_preparing_transformation`).
    """
    prep = find_preparing_transformation(space.F, omega, theory, space.tol)
    e = space.unit_effect
    norm = float(e @ prep.T @ space.F @ e)
    rho = space.vector(transpose(prep.T, space.F, space.tol)) / norm
    return BornState(rho, prep.T, prep.probability)


def born_probability(A: np.ndarray, rho: np.ndarray, space: GnsSpace) -> float:
    """``<A^dagger | rho>``, which reproduces the probability of ``A``."""
    return float(np.real(np.vdot(space.vector(space.adjoint(A)), rho)))


def born_conditioned(B: np.ndarray, A: np.ndarray, rho: np.ndarray, space: GnsSpace) -> float:
    """``<B^dagger | pi(A) rho>``, the probability of ``A`` followed by ``B``."""
    moved = representation(A, space) @ rho
    return float(np.real(np.vdot(space.vector(space.adjoint(B)), moved)))
