"""Identify an unknown transformation from joint statistics on half of a faithful state.

Outcome ``(i, j)`` means fiducial effect ``f_i`` clicked on system 1 after the
unknown ``A``, and ``g_j`` clicked on system 2.  Its probability is
``p_ij = (f_i @ R_A) @ F @ g_j``.  When ``A`` is not deterministic, the extra
"no occurrence" outcome carries ``1 - sum(p)``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import quantum
from .errors import IdentifiabilityError, InputError
from .linalg import eigh, numerical_rank
from .models import rng_for

NO_OCCURRENCE = -1


def outcome_probabilities(F, A, fiducials1, fiducials2) -> np.ndarray:
    return np.asarray(fiducials1) @ np.asarray(A) @ np.asarray(F) @ np.asarray(fiducials2).T


def simulate_outcomes(F, A, fiducials1, fiducials2, shots: int, seed, tol: float = 1e-9):
    """Multinomial sample of ``shots`` runs.

    Returns ``(counts, missed)``: the ``k1 x k2`` table and the number of runs
    in which ``A`` did not occur.
    """
    p = outcome_probabilities(F, A, fiducials1, fiducials2)
    if p.min() < -tol:
        raise InputError(f"negative outcome probability {p.min():.3g}; model is not physical")
    p = np.clip(p, 0.0, None)
    missed_p = 1.0 - p.sum()
    if missed_p < -tol:
        raise InputError(f"outcome probabilities sum to {p.sum():.6g} > 1")
    if shots < 0:
        raise InputError("shots must be nonnegative")
    if shots == 0:
        return np.zeros(p.shape, dtype=np.int64), 0
    pv = np.append(p.ravel(), max(missed_p, 0.0))
    draws = rng_for(seed).multinomial(shots, pv / pv.sum())
    return draws[:-1].reshape(p.shape), int(draws[-1])


def design_matrix(F, fiducials1, fiducials2) -> np.ndarray:
    """Rows ``kron(f_i, F @ g_j)`` so that ``design @ R.ravel() = p.ravel()``."""
    Fg = np.asarray(fiducials2) @ np.asarray(F).T  # rows (F @ g_j)
    return np.einsum("ik,jl->ijkl", np.asarray(fiducials1), Fg).reshape(
        len(fiducials1) * len(fiducials2), -1
    )


def estimate_transformation(table, F, fiducials1, fiducials2, shots: int | None = None, tol: float = 1e-9):
    """Ordinary least-squares inversion of ``p_ij = f_i @ R @ F @ g_j``.

    ``table`` holds probabilities, or counts when ``shots`` is given.
    Raises :class:`IdentifiabilityError` if the design has rank below ``d^2``.
    """
    F = np.asarray(F, dtype=float)
    d = F.shape[0]
    X = design_matrix(F, fiducials1, fiducials2)
    rank, _ = numerical_rank(X, tol)
    if rank < d * d:
        raise IdentifiabilityError(f"design matrix rank {rank} < {d * d}")
    p = np.asarray(table, dtype=float)
    if shots is not None:
        if shots <= 0:
            raise InputError("cannot estimate from zero shots")
        p = p / shots
    sol, *_ = np.linalg.lstsq(X, p.ravel(), rcond=None)
    return sol.reshape(d, d)


def estimation_error(R_hat, R, states=None, unit_effect=None) -> dict:
    """Frobenius distance, plus worst effect-probability deviation over ``states`` columns."""
    R_hat, R = np.asarray(R_hat), np.asarray(R)
    out = {"frobenius": float(np.linalg.norm(R_hat - R))}
    if states is not None and unit_effect is not None:
        dev = (unit_effect @ (R_hat - R)) @ states
        out["worst_probability_deviation"] = float(np.max(np.abs(dev))) if dev.size else 0.0
    return out


def project_to_cone(theory, R_hat) -> np.ndarray:
    """Optional post-step: nearby physical map (not part of the linear estimator).

    quantum-choi: clip negative Choi eigenvalues, then shrink until the effect is
    below the unit effect; classical: clip negative entries, then rescale columns
    whose sum exceeds one.  Other cones are returned unchanged.
    """
    R_hat = np.asarray(R_hat, dtype=float)
    kind = theory.cone.kind
    if kind == "quantum-choi":
        w, v = eigh(quantum.choi_from_ptm(R_hat))
        J = (v * np.clip(w, 0.0, None)) @ v.conj().T
        R = quantum.ptm_from_choi(J)
        top = np.linalg.eigvalsh(quantum.effect_operator(theory.unit_effect @ R))[-1]
        return R / max(1.0, float(top))
    if kind == "classical-substochastic":
        R = np.clip(R_hat, 0.0, None)
        return R / np.maximum(R.sum(axis=0), 1.0)
    return R_hat


@dataclass(frozen=True)
class CalibrationRun:
    R: np.ndarray
    shots: int
    seed: int
    fiducials1: np.ndarray
    fiducials2: np.ndarray
    counts: np.ndarray
    missed: int
    estimate: np.ndarray
    errors: dict


def calibrate(
    theory, R, shots: int, seed: int, fiducials1=None, fiducials2=None, tol: float = 1e-9, project: bool = False
) -> CalibrationRun:
    from .models import default_fiducials

    F = theory.faithful
    if F is None:
        raise InputError(f"theory {theory.name!r} declares no faithful state")
    f1 = default_fiducials(theory) if fiducials1 is None else np.asarray(fiducials1)
    f2 = f1 if fiducials2 is None else np.asarray(fiducials2)
    counts, missed = simulate_outcomes(F, R, f1, f2, shots, seed, tol)
    R_hat = estimate_transformation(counts, F, f1, f2, shots=shots, tol=tol)
    if project:
        R_hat = project_to_cone(theory, R_hat)
    errors = estimation_error(R_hat, R, theory.state_matrix, theory.unit_effect)
    return CalibrationRun(np.asarray(R), shots, seed, f1, f2, counts, missed, R_hat, errors)


def counts_to_csv(counts: np.ndarray, missed: int) -> str:
    """CSV with header ``i,j,count``; the no-occurrence outcome is row ``-1,-1``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "count"])
    for (i, j), c in np.ndenumerate(counts):
        w.writerow([i, j, int(c)])
    w.writerow([NO_OCCURRENCE, NO_OCCURRENCE, int(missed)])
    return buf.getvalue()


def counts_from_csv(text: str, shape: tuple[int, int]):
    counts = np.zeros(shape, dtype=np.int64)
    missed = 0
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != ["i", "j", "count"]:
        raise InputError(f"counts CSV header must be i,j,count, got {reader.fieldnames}")
    for row in reader:
        i, j, c = int(row["i"]), int(row["j"]), int(row["count"])
        if i == NO_OCCURRENCE and j == NO_OCCURRENCE:
            missed += c
        else:
            counts[i, j] += c
    return counts, missed
