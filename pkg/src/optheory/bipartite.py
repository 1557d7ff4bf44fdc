"""Two independent copies of a system: local action, bipartite forms, faithfulness.

A bipartite state is handled through its form matrix ``F`` with
``Phi(a, b) = a @ F @ b`` for local effects ``a`` (system 1) and ``b`` (system 2).
Acting with ``A`` on system 1 turns ``F`` into ``R_A @ F``.  Joint effects live
in the Kronecker product space, with ``A`` on system 1 written as ``R_A (x) I``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import quantum
from .errors import FaithfulnessError, InputError, NotPreparableError
from .linalg import invert_form, numerical_rank, psd_sqrt
from .report import AXIOM, CLAIM, Check, check
from .theory import DEFAULT_TOL, Theory, hull_coefficients, in_cone

BISECTION_STEPS = 64
BISECTION_TOL = 1e-14


def local_on(R: np.ndarray, side: int, d: int | None = None) -> np.ndarray:
    """Lift a local right-action matrix to the d^2-dimensional joint effect space."""
    R = np.asarray(R)
    eye = np.eye(d or R.shape[0])
    if side == 1:
        return np.kron(R, eye)
    if side == 2:
        return np.kron(eye, R)
    raise InputError(f"side must be 1 or 2, got {side}")


def check_independence(first: Sequence[np.ndarray], second: Sequence[np.ndarray], tol: float = DEFAULT_TOL) -> bool:
    """True iff every transformation in ``first`` commutes with every one in ``second``."""
    for a in first:
        for b in second:
            a, b = np.asarray(a), np.asarray(b)
            if a.shape != b.shape:
                raise InputError(f"joint transformations have shapes {a.shape} and {b.shape}")
            if np.max(np.abs(a @ b - b @ a)) > tol:
                return False
    return True


def local_state(F: np.ndarray, unit_effect: np.ndarray, side: int = 1) -> np.ndarray:
    """Marginal on ``side``: ``Phi(., e)`` for side 1 and ``Phi(e, .)`` for side 2."""
    F = np.asarray(F)
    if side == 1:
        return F @ unit_effect
    if side == 2:
        return F.T @ unit_effect
    raise InputError(f"side must be 1 or 2, got {side}")


@dataclass(frozen=True)
class FaithfulnessReport:
    faithful: bool
    rank: int
    singular_values: np.ndarray


def is_dynamically_faithful(F: np.ndarray, tol: float = DEFAULT_TOL) -> FaithfulnessReport:
    """``A -> R_A @ F`` is injective exactly when ``F`` is nonsingular."""
    F = np.asarray(F, dtype=float)
    rank, sv = numerical_rank(F, tol)
    return FaithfulnessReport(rank == F.shape[0], rank, sv)


def transpose(A: np.ndarray, F: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Transposed transformation: the unique ``A'`` with ``R_A @ F = F @ R_A'.T``.

    For symmetric ``F`` this is ``F @ R_A.T @ inv(F)``.  The map is linear (no
    complex conjugation).  Raises :class:`FaithfulnessError` for singular ``F``.
    """
    F = np.asarray(F, dtype=float)
    A = np.asarray(A)
    if A.shape != F.shape:
        raise InputError(f"transformation shape {A.shape} does not match form shape {F.shape}")
    Finv = invert_form(F, tol)
    return (Finv @ A @ F).T


def form_checks(F: np.ndarray, theory: Theory, tol: float = DEFAULT_TOL) -> list[Check]:
    """Invariants of a symmetric bipartite state form against ``theory``."""
    F = np.asarray(F, dtype=float)
    e = theory.unit_effect
    out = [
        check("form-symmetric", float(np.max(np.abs(F - F.T))), tol),
        check("form-normalized", abs(float(e @ F @ e) - 1.0), tol),
    ]
    effects = [e @ R for R in [theory.identity, *theory.transformations.values()]]
    E = np.array(effects)
    joint = E @ F @ E.T
    out.append(check("form-range-on-generator-effects", max(0.0, -joint.min(), joint.max() - 1.0), tol))
    worst = 0.0
    for side in (1, 2):
        s = local_state(F, e, side)
        worst = max(worst, abs(float(e @ s) - 1.0), _state_violation(theory, s))
    out.append(check("local-states-physical", worst, tol))
    return out


def _state_violation(theory: Theory, s: np.ndarray) -> float:
    if theory.cone.kind == "quantum-choi":
        w = np.linalg.eigvalsh(quantum.state_operator(s))
        return max(0.0, -float(w[0]))
    probs = [(theory.unit_effect @ R) @ s for R in theory.transformations.values()]
    if not probs:
        return 0.0
    return max(0.0, -min(probs), max(probs) - 1.0)


# ---------------------------------------------------------------------------
# preparation


@dataclass(frozen=True)
class PreparationResult:
    T: np.ndarray
    probability: float
    physical: bool
    detail: dict = field(default_factory=dict)


def realize_effect(theory: Theory, t: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray | None:
    """Some transformation with effect ``t`` that is physical up to scale, or None."""
    t = np.asarray(t, dtype=float)
    kind = theory.cone.kind
    if kind == "classical-substochastic":
        if t.min() < -tol:
            return None
        return np.diag(np.clip(t, 0.0, None))
    if kind == "quantum-choi":
        E = quantum.effect_operator(t)
        if np.linalg.eigvalsh(E)[0] < -tol:
            return None
        # Lueders instrument: single Kraus operator sqrt(E)
        return quantum.ptm_from_kraus_unchecked([psd_sqrt(E)])
    found = hull_coefficients(theory, t, use_effects=True)
    if found is None:
        return None
    gens, c = found
    return sum(ci * g for ci, g in zip(c, gens))


def _largest_scale(theory: Theory, R0: np.ndarray) -> float:
    """Bisection for the largest lambda in [0, 1] with lambda * R0 in the cone."""
    if in_cone(theory, R0, BISECTION_TOL):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if in_cone(theory, mid * R0, BISECTION_TOL):
            lo = mid
        else:
            hi = mid
    return lo


def find_preparing_transformation(
    F: np.ndarray, target: np.ndarray, theory: Theory, tol: float = DEFAULT_TOL
) -> PreparationResult:
    """Local transformation on system 1 that steers ``F`` to ``target``.

    ``target`` is either a state vector of system 2 (the conditional marginal
    to prepare) or a full bipartite form ``Omega`` with ``R_T @ F = lambda * Omega``.
    The success probability ``lambda`` is the largest value in ``(0, 1]`` that
    keeps ``T`` physical.
    """
    F = np.asarray(F, dtype=float)
    target = np.asarray(target, dtype=float)
    Finv = invert_form(F, tol)
    if target.ndim == 1:
        # effect t of T must satisfy F.T @ t = lambda * s
        t0 = Finv.T @ target
        R0 = realize_effect(theory, t0, tol)
        if R0 is None:
            raise NotPreparableError(f"required effect {t0.tolist()} is not positive")
    elif target.shape == F.shape:
        R0 = target @ Finv
    else:
        raise InputError(f"target has shape {target.shape}")
    lam = _largest_scale(theory, R0)
    if lam <= tol:
        raise NotPreparableError("no nonzero success probability keeps the preparation physical")
    T = lam * R0
    return PreparationResult(T, lam, in_cone(theory, T, tol))


def prepared_marginal(F: np.ndarray, T: np.ndarray, unit_effect: np.ndarray) -> np.ndarray:
    """Normalized system-2 marginal after ``T`` occurred on system 1."""
    s = (unit_effect @ T @ F)
    return s / (s @ unit_effect)


def is_preparationally_faithful(F: np.ndarray, theory: Theory, tol: float = DEFAULT_TOL) -> tuple[bool, list[Check]]:
    """Try to prepare every declared extremal state of system 2 from ``F``."""
    checks = []
    ok = True
    for name, s in theory.extremal_states.items():
        try:
            prep = find_preparing_transformation(F, s, theory, tol)
        except (NotPreparableError, FaithfulnessError) as exc:
            ok = False
            checks.append(Check(f"prepare[{name}]", "fail", None, CLAIM, {"error": str(exc)}))
            continue
        mismatch = float(np.max(np.abs(prepared_marginal(F, prep.T, theory.unit_effect) - s)))
        good = prep.physical and prep.probability > tol and mismatch <= 1e-8
        ok &= good
        checks.append(
            Check(
                f"prepare[{name}]",
                "pass" if good else "fail",
                mismatch,
                CLAIM,
                {"probability": prep.probability, "physical": prep.physical},
            )
        )
    return ok, checks


def faithfulness_checks(F: np.ndarray, theory: Theory, tol: float = DEFAULT_TOL) -> list[Check]:
    rep = is_dynamically_faithful(F, tol)
    out = form_checks(F, theory, tol)
    out.append(
        Check(
            "dynamically-faithful",
            "pass" if rep.faithful else "fail",
            float(theory.effect_dim - rep.rank),
            AXIOM,
            {"rank": rep.rank, "singular_values": rep.singular_values},
        )
    )
    if rep.faithful:
        _, preps = is_preparationally_faithful(F, theory, tol)
    else:
        preps = [Check("preparationally-faithful", "fail", None, CLAIM, {"error": "form is singular"})]
    out.extend(preps)
    return out
