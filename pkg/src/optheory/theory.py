"""Single-system operational theories: states, effects, transformations.

Conventions, fixed once for the whole package:

* an effect is a row vector ``a`` of length ``d``; a state is a column ``s``;
  the probability of ``a`` on ``s`` is ``a @ s``;
* a transformation ``A`` is its right-action matrix ``R_A`` on effects, so the
  effect of ``A`` is ``e @ R_A`` and the action on states is ``s -> R_A @ s``;
* ``B o A`` means "A occurs, then B", with matrix ``R_B @ R_A``.
  :func:`compose(X, Y) <compose>` returns the matrix of ``X o Y``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from . import quantum
from .errors import CoexistenceError, InputError, ZeroProbabilityError
from .linalg import numerical_rank
from .report import AXIOM, Check, check

DEFAULT_TOL = 1e-9

CONE_KINDS = ("classical-substochastic", "quantum-choi", "hull")


@dataclass(frozen=True)
class Cone:
    """Which transformations count as physical.

    ``classical-substochastic``: nonnegative matrices whose column sums are at most 1.
    ``quantum-choi``: completely positive, trace non-increasing maps on an
    ``hilbert_dim``-level system, written in the coordinates of :mod:`optheory.quantum`.
    ``hull``: nonnegative combinations of the listed generators (and the identity)
    whose effect stays below the unit effect.
    """

    kind: str
    hilbert_dim: int | None = None

    def __post_init__(self):
        if self.kind not in CONE_KINDS:
            raise InputError(f"unknown cone kind {self.kind!r}")
        if self.kind == "quantum-choi" and not self.hilbert_dim:
            raise InputError("quantum-choi cone needs hilbert_dim")


def _frozen(a, dtype=float) -> np.ndarray:
    out = np.array(a, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Theory:
    name: str
    effect_dim: int
    unit_effect: np.ndarray
    identity: np.ndarray
    transformations: Mapping[str, np.ndarray]
    extremal_states: Mapping[str, np.ndarray]
    cone: Cone
    faithful: np.ndarray | None = None
    experiments: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        d = self.effect_dim
        if not isinstance(d, (int, np.integer)) or d < 1:
            raise InputError(f"effect_dim must be a positive integer, got {d!r}")
        set_ = object.__setattr__
        set_(self, "unit_effect", _frozen(self.unit_effect))
        set_(self, "identity", _frozen(self.identity))
        _require_shape("unit_effect", self.unit_effect, (d,))
        _require_shape("identity", self.identity, (d, d))
        mats = {}
        for name, m in self.transformations.items():
            mats[name] = _frozen(m)
            _require_shape(f"transformation {name!r}", mats[name], (d, d))
        states = {}
        for name, s in self.extremal_states.items():
            states[name] = _frozen(s)
            _require_shape(f"state {name!r}", states[name], (d,))
        set_(self, "transformations", MappingProxyType(mats))
        set_(self, "extremal_states", MappingProxyType(states))
        if self.faithful is not None:
            set_(self, "faithful", _frozen(self.faithful))
            _require_shape("faithful_state", self.faithful, (d, d))
        exps = {k: tuple(v) for k, v in self.experiments.items()}
        for ename, members in exps.items():
            for m in members:
                if m not in mats:
                    raise InputError(f"experiment {ename!r} names unknown transformation {m!r}")
        set_(self, "experiments", MappingProxyType(exps))
        if self.cone.kind == "quantum-choi" and self.cone.hilbert_dim**2 != d:
            raise InputError(f"quantum-choi needs effect_dim = n^2, got d={d}, n={self.cone.hilbert_dim}")

    def transformation(self, name: str) -> np.ndarray:
        if name == "identity":
            return self.identity
        try:
            return self.transformations[name]
        except KeyError:
            raise InputError(f"theory {self.name!r} has no transformation {name!r}") from None

    @property
    def state_matrix(self) -> np.ndarray:
        """Extremal states as columns, shape (d, n_states)."""
        if not self.extremal_states:
            return np.zeros((self.effect_dim, 0))
        return np.column_stack(list(self.extremal_states.values()))


def _require_shape(what, arr, shape):
    if arr.shape != shape:
        raise InputError(f"{what} has shape {arr.shape}, expected {shape}")


def _check_dims(*pairs):
    for what, arr, d in pairs:
        if np.shape(arr)[-1] != d:
            raise InputError(f"{what} has shape {np.shape(arr)}, expected last dimension {d}")


# ---------------------------------------------------------------------------
# statistics


def probability(state: np.ndarray, effect: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """Probability ``effect @ state``; warns when it leaves ``[-tol, 1 + tol]``."""
    state = np.asarray(state)
    effect = np.asarray(effect)
    if state.shape != effect.shape:
        raise InputError(f"state shape {state.shape} does not match effect shape {effect.shape}")
    p = float(np.real(effect @ state))
    if p < -tol or p > 1 + tol:
        warnings.warn(f"probability {p!r} outside [0, 1]", RuntimeWarning, stacklevel=2)
    return p


def effect_of(A: np.ndarray, theory: Theory) -> np.ndarray:
    _check_dims(("transformation", A, theory.effect_dim))
    return theory.unit_effect @ np.asarray(A)


def conditional_state(state: np.ndarray, A: np.ndarray, theory: Theory, tol: float = DEFAULT_TOL):
    """Bayes update of ``state`` after ``A`` occurred.

    Returns the renormalized state ``R_A s / p`` and the occurrence probability ``p``.
    """
    A = np.asarray(A)
    state = np.asarray(state)
    _check_dims(("state", state, theory.effect_dim), ("transformation", A, theory.effect_dim))
    out = A @ state
    p = float(theory.unit_effect @ out)
    if p <= tol:
        raise ZeroProbabilityError(f"transformation occurs with probability {p:.3g}")
    return out / p, p


def compose(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix of ``A o B`` (B occurs first)."""
    A, B = np.asarray(A), np.asarray(B)
    if A.shape != B.shape:
        raise InputError(f"cannot compose shapes {A.shape} and {B.shape}")
    return A @ B


def add_transformations(A, B, theory: Theory | None = None, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Coarse-grained sum ``A + B``.

    With ``theory`` given the sum is required to be physical, which needs ``A``
    and ``B`` to be coexistent.
    """
    A, B = np.asarray(A), np.asarray(B)
    if A.shape != B.shape:
        raise InputError(f"cannot add shapes {A.shape} and {B.shape}")
    if theory is not None and not are_coexistent(A, B, theory, tol):
        raise CoexistenceError("transformations are not coexistent; their sum is not physical")
    return A + B


def scale(lam: float, A, physical: bool = False) -> np.ndarray:
    if physical and not 0.0 <= lam <= 1.0:
        raise InputError(f"physical rescaling needs 0 <= lambda <= 1, got {lam}")
    return lam * np.asarray(A)


def are_coexistent(A, B, theory: Theory, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``w(A) + w(B) <= 1`` on every declared extremal state.

    The supremum of a linear functional over the state set is attained at an
    extreme point, so this is exact when the declared list generates the set.
    """
    states = theory.state_matrix
    if states.shape[1] == 0:
        return True
    total = (effect_of(A, theory) + effect_of(B, theory)) @ states
    return bool(np.max(total) <= 1 + tol)


def informationally_equivalent(A, B, theory: Theory, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.max(np.abs(effect_of(A, theory) - effect_of(B, theory))) <= tol)


def dynamically_equivalent(A, B, theory: Theory, tol: float = DEFAULT_TOL) -> bool:
    """Conditional states agree on every extremal state where either occurs."""
    A, B = np.asarray(A), np.asarray(B)
    for s in theory.extremal_states.values():
        pa = float(theory.unit_effect @ A @ s)
        pb = float(theory.unit_effect @ B @ s)
        if pa <= tol and pb <= tol:
            continue
        if pa <= tol or pb <= tol:
            return False
        if np.max(np.abs(A @ s / pa - B @ s / pb)) > tol:
            return False
    return True


def is_observable(effects: Sequence[np.ndarray], theory: Theory, tol: float = DEFAULT_TOL) -> bool:
    if len(effects) == 0:
        return False
    total = np.sum(np.asarray(effects, dtype=float), axis=0)
    _check_dims(("effects", total, theory.effect_dim))
    return bool(np.max(np.abs(total - theory.unit_effect)) <= tol)


def is_informationally_complete(effects: Sequence[np.ndarray], theory: Theory, tol: float = DEFAULT_TOL) -> bool:
    """The effects span the whole effect space (numerical rank ``d``)."""
    if len(effects) == 0:
        return False
    m = np.asarray(effects, dtype=float)
    _check_dims(("effects", m, theory.effect_dim))
    rank, _ = numerical_rank(m, tol)
    return rank == theory.effect_dim


def is_minimal_informationally_complete(effects, theory: Theory, tol: float = DEFAULT_TOL) -> bool:
    return len(effects) == theory.effect_dim and is_informationally_complete(effects, theory, tol)


# ---------------------------------------------------------------------------
# physicality


def effect_violation(theory: Theory, a: np.ndarray) -> float:
    """How far ``a`` is from being a physical effect (0 when it is one)."""
    a = np.asarray(a, dtype=float)
    kind = theory.cone.kind
    if kind == "classical-substochastic":
        lo = np.min(a)
        hi = np.max(a @ theory.state_matrix) if theory.extremal_states else np.max(a)
        return float(max(0.0, -lo, hi - 1.0))
    if kind == "quantum-choi":
        w = np.linalg.eigvalsh(quantum.effect_operator(a))
        return float(max(0.0, -w[0], w[-1] - 1.0))
    probs = a @ theory.state_matrix
    if probs.size == 0:
        return 0.0
    return float(max(0.0, -np.min(probs), np.max(probs) - 1.0))


def is_physical_effect(theory: Theory, a, tol: float = DEFAULT_TOL) -> bool:
    return effect_violation(theory, a) <= tol


def cone_violation(theory: Theory, R: np.ndarray) -> float:
    """Distance-like residual of ``R`` from the physical cone (0 inside)."""
    R = np.asarray(R, dtype=float)
    kind = theory.cone.kind
    dominance = effect_violation(theory, theory.unit_effect - theory.unit_effect @ R)
    positivity = effect_violation(theory, theory.unit_effect @ R)
    if kind == "classical-substochastic":
        return float(max(0.0, -np.min(R), dominance, positivity))
    if kind == "quantum-choi":
        w = np.linalg.eigvalsh(quantum.choi_from_ptm(R))
        return float(max(0.0, -w[0], dominance))
    return float(max(_hull_residual(theory, R), dominance, positivity))


def in_cone(theory: Theory, R, tol: float = DEFAULT_TOL) -> bool:
    return cone_violation(theory, R) <= tol


def _hull_residual(theory: Theory, R: np.ndarray) -> float:
    """L1 distance from ``R`` to the nonnegative span of the generators, by LP."""
    gens = [theory.identity, *theory.transformations.values()]
    G = np.column_stack([g.ravel() for g in gens])
    m, k = G.shape
    # minimize sum(p + q)  s.t.  G c + p - q = vec(R),  c, p, q >= 0
    A_eq = np.hstack([G, np.eye(m), -np.eye(m)])
    cost = np.concatenate([np.zeros(k), np.ones(2 * m)])
    res = linprog(cost, A_eq=A_eq, b_eq=R.ravel(), bounds=(0, None), method="highs")
    if res.status != 0:
        return float("inf")
    return float(res.fun)


def hull_coefficients(theory: Theory, target: np.ndarray, use_effects: bool = False):
    """Nonnegative generator weights reproducing ``target`` exactly, or None.

    With ``use_effects`` the match is on effects ``e @ R_k`` instead of matrices.
    """
    gens = [theory.identity, *theory.transformations.values()]
    if use_effects:
        cols = [theory.unit_effect @ g for g in gens]
    else:
        cols = [g.ravel() for g in gens]
    G = np.column_stack(cols)
    res = linprog(np.ones(G.shape[1]), A_eq=G, b_eq=np.ravel(target), bounds=(0, None), method="highs")
    if res.status != 0:
        return None
    return gens, res.x


# ---------------------------------------------------------------------------
# validation


def validate_theory(theory: Theory, tol: float = DEFAULT_TOL) -> list[Check]:
    """Check the structural axioms of ``theory``; failures are records, not exceptions."""
    d = theory.effect_dim
    e = theory.unit_effect
    states = theory.state_matrix
    checks = []

    residual = max(
        float(np.max(np.abs(theory.identity - np.eye(d)))),
        float(np.max(np.abs(e @ theory.identity - e))),
    )
    checks.append(check("identity-neutrality", residual, tol))

    if states.shape[1]:
        norm_res = float(np.max(np.abs(e @ states - 1.0)))
    else:
        norm_res = 0.0
    checks.append(check("state-normalization", norm_res, tol, n_states=states.shape[1]))

    worst = 0.0
    for R in [theory.identity, *theory.transformations.values()]:
        if states.shape[1]:
            p = (e @ R) @ states
            worst = max(worst, float(-np.min(p)), float(np.max(p) - 1.0))
    checks.append(check("effect-range-on-extremal-states", max(worst, 0.0), tol))

    exp_res = 0.0
    for members in theory.experiments.values():
        total = sum(effect_of(theory.transformations[m], theory) for m in members)
        exp_res = max(exp_res, float(np.max(np.abs(total - e))))
    checks.append(check("experiment-completeness", exp_res, tol, n_experiments=len(theory.experiments)))

    cone_res = 0.0
    worst_name = None
    for name, R in [("identity", theory.identity), *theory.transformations.items()]:
        r = cone_violation(theory, R)
        if r > cone_res:
            cone_res, worst_name = r, name
    checks.append(check("cone-membership", cone_res, tol, cone=theory.cone.kind, worst=worst_name))
    return checks


def validation_passed(checks: Sequence[Check]) -> bool:
    return all(c.passed for c in checks if c.category == AXIOM)
