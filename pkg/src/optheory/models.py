"""Built-in theories (classical n-level system, qubit) and seeded random elements."""

from __future__ import annotations

import numpy as np

from . import quantum
from .errors import InputError
from .linalg import eigh
from .theory import Cone, Theory, in_cone

# generic rotation angle for the built-in qubit unitaries
ROTATION_ANGLE = np.pi / 3


def build_classical(n: int = 2) -> Theory:
    """Classical n-outcome probability theory with the perfectly correlated form ``I/n``.

    Effects and states use point coordinates; ``select_k`` keeps outcome k and
    discards the rest, ``cycle`` permutes outcomes cyclically.
    """
    if n < 1:
        raise InputError(f"classical model needs n >= 1, got {n}")
    eye = np.eye(n)
    transformations = {}
    for k in range(n):
        transformations[f"select_{k}"] = np.diag(eye[k])
    if n >= 2:
        transformations["cycle"] = np.roll(eye, 1, axis=0)
        swap = eye.copy()
        swap[[0, 1]] = swap[[1, 0]]
        transformations["swap_01"] = swap
        reset = np.zeros((n, n))
        reset[0, :] = 1.0
        transformations["reset_0"] = reset
    states = {f"point_{k}": eye[k] for k in range(n)}
    return Theory(
        name=f"classical{n}",
        effect_dim=n,
        unit_effect=np.ones(n),
        identity=eye,
        transformations=transformations,
        extremal_states=states,
        cone=Cone("classical-substochastic"),
        faithful=eye / n,
        experiments={"readout": tuple(f"select_{k}" for k in range(n))},
    )


def rotation(axis: int, theta: float) -> np.ndarray:
    """Qubit unitary exp(-i theta sigma_axis / 2), axis in {1, 2, 3}."""
    s = quantum.PAULI[axis]
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * s


def projector(axis: int, sign: int) -> np.ndarray:
    return 0.5 * (np.eye(2) + sign * quantum.PAULI[axis])


def ptm_from_kraus(kraus, tol: float = 1e-9) -> np.ndarray:
    """Right-action matrix of the Heisenberg map ``E -> sum K^dagger E K``.

    Equal to the Pauli transfer matrix ``R[mu, nu] = Tr[sigma_mu A(sigma_nu)] / n``.
    Raises :class:`InputError` for a trace-increasing Kraus set.
    """
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    if not kraus:
        raise InputError("empty Kraus set")
    n = kraus[0].shape[0]
    defect = np.eye(n) - sum(k.conj().T @ k for k in kraus)
    w, _ = eigh(defect)
    if w[0] < -tol:
        raise InputError(f"Kraus set is trace increasing (defect eigenvalue {w[0]:.3g})")
    return quantum.ptm_from_kraus_unchecked(kraus)


def unitary_channel(U: np.ndarray) -> np.ndarray:
    return quantum.ptm_from_kraus_unchecked([U])


def bell_form() -> np.ndarray:
    """F[mu, nu] = Tr[(sigma_mu (x) sigma_nu) |Phi+><Phi+|] / 4."""
    phi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    rho = np.outer(phi, phi.conj())
    P = quantum.PAULI
    F = np.array([[np.trace(np.kron(P[m], P[n]) @ rho).real for n in range(4)] for m in range(4)]) / 4
    F[np.abs(F) < 1e-15] = 0.0
    return F


def build_qubit() -> Theory:
    """Qubit quantum theory in Pauli coordinates with the Bell-state form."""
    t = {}
    for axis, label in ((1, "x"), (2, "y"), (3, "z")):
        t[f"r{label}"] = unitary_channel(rotation(axis, ROTATION_ANGLE))
    t["flip_x"] = unitary_channel(quantum.PAULI[1])
    for axis, label in ((1, "x"), (2, "y"), (3, "z")):
        t[f"meas_{label}0"] = quantum.ptm_from_kraus_unchecked([projector(axis, +1)])
        t[f"meas_{label}1"] = quantum.ptm_from_kraus_unchecked([projector(axis, -1)])
    t["depolarize"] = np.diag([1.0, 0.5, 0.5, 0.5])
    t["full_depolarize"] = np.diag([1.0, 0.0, 0.0, 0.0])
    for k in t:
        t[k] = _clean(t[k])
    states = {}
    for axis, label in ((1, "x"), (2, "y"), (3, "z")):
        for sign, tag in ((+1, "+"), (-1, "-")):
            states[f"{label}{tag}"] = quantum.state_coords(projector(axis, sign))
    return Theory(
        name="qubit",
        effect_dim=4,
        unit_effect=quantum.unit_effect(2),
        identity=np.eye(4),
        transformations=t,
        extremal_states=states,
        cone=Cone("quantum-choi", hilbert_dim=2),
        faithful=bell_form(),
        experiments={f"measure_{a}": (f"meas_{a}0", f"meas_{a}1") for a in "xyz"},
    )


def _clean(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=float)
    m[np.abs(m) < 1e-15] = 0.0
    return m


def build_model(name: str) -> Theory:
    """Built-in theory by name: ``qubit`` or ``classicalN`` (``classical2``, ``classical3``...)."""
    if name == "qubit":
        return build_qubit()
    if name.startswith("classical"):
        suffix = name[len("classical"):]
        if suffix.isdigit():
            return build_classical(int(suffix))
    raise InputError(f"unknown model {name!r}; expected 'qubit' or 'classicalN'")


# ---------------------------------------------------------------------------
# fiducial observables


def pauli_fiducials() -> np.ndarray:
    """Six-outcome observable {|+-k><+-k| / 3}, informationally complete for a qubit."""
    rows = []
    for axis in (1, 2, 3):
        for sign in (+1, -1):
            rows.append(quantum.effect_coords(projector(axis, sign) / 3))
    return np.array(rows)


def tetrahedral_fiducials() -> np.ndarray:
    """Minimal informationally complete qubit observable (tetrahedral SIC)."""
    verts = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3)
    return np.array([[1.0, *v] for v in verts]) * 0.5


def default_fiducials(theory: Theory) -> np.ndarray:
    if theory.cone.kind == "quantum-choi" and theory.cone.hilbert_dim == 2:
        return pauli_fiducials()
    if theory.cone.kind == "classical-substochastic":
        return np.eye(theory.effect_dim)
    raise InputError(f"no default fiducial observable for theory {theory.name!r}")


# ---------------------------------------------------------------------------
# random elements


def rng_for(seed) -> np.random.Generator:
    """PCG64 generator; ``seed`` may be an int or a ``SeedSequence`` (e.g. from ``spawn``)."""
    return np.random.Generator(np.random.PCG64(seed))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_kraus(n: int, rng: np.random.Generator, max_ops: int | None = None):
    """Random trace non-increasing Kraus set from complex Gaussian matrices."""
    max_ops = max_ops or n * n
    k = int(rng.integers(1, max_ops + 1))
    ops = (rng.standard_normal((k, n, n)) + 1j * rng.standard_normal((k, n, n))) / np.sqrt(2)
    total = np.einsum("kji,kjl->il", ops.conj(), ops)
    top = np.linalg.eigvalsh(total)[-1]
    shrink = rng.uniform(0.5, 1.0)
    return list(ops * np.sqrt(shrink / top))


def random_transformation(seed, theory: Theory) -> np.ndarray:
    """Deterministic random physical transformation of ``theory``.

    quantum-choi: PTM of a random Kraus set; classical: random substochastic
    matrix; hull: random nonnegative combination of generators rescaled into the cone.
    """
    rng = rng_for(seed)
    kind = theory.cone.kind
    d = theory.effect_dim
    if kind == "quantum-choi":
        return quantum.ptm_from_kraus_unchecked(random_kraus(theory.cone.hilbert_dim, rng))
    if kind == "classical-substochastic":
        m = rng.exponential(size=(d, d))
        m *= rng.uniform(0, 1, size=d) < 0.8  # sparsify a little
        cols = m.sum(axis=0)
        cols[cols == 0] = 1.0
        return m / cols * rng.uniform(0.5, 1.0, size=d)
    gens = [theory.identity, *theory.transformations.values()]
    w = rng.exponential(size=len(gens))
    R = sum(wi * g for wi, g in zip(w, gens))
    lo, hi = 0.0, 1.0
    if in_cone(theory, R):
        return R
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if in_cone(theory, mid * R):
            lo = mid
        else:
            hi = mid
    return lo * R


def random_state(seed, theory: Theory) -> np.ndarray:
    """Random normalized state: mixed density matrix or point mixture."""
    rng = rng_for(seed)
    if theory.cone.kind == "quantum-choi":
        n = theory.cone.hilbert_dim
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        rho = z @ z.conj().T
        return quantum.state_coords(rho / np.trace(rho).real)
    states = theory.state_matrix
    w = rng.dirichlet(np.ones(states.shape[1]))
    return states @ w


def random_element(seed, theory: Theory) -> np.ndarray:
    """Random element of the complexified algebra: complex combination of two physical maps."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    a, b, c = ss.spawn(3)
    rng = rng_for(c)
    coeff = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return coeff[0] * random_transformation(a, theory) + coeff[1] * random_transformation(b, theory)
