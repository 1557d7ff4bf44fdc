"""Seeded property suites, one per CLI subcommand.

Each suite returns ``(checks, data)``; ``data`` holds JSON-ready measurements.
"""

from __future__ import annotations

import numpy as np

from . import bipartite, calibration, gns, models, quantum
from .config import DEFAULT_TOLERANCES
from .errors import InputError
from .report import CLAIM, FAIL, PASS, Check, check, info
from .theory import (
    Theory,
    compose,
    conditional_state,
    cone_violation,
    effect_of,
    probability,
    validate_theory,
)

_T = DEFAULT_TOLERANCES
BAYES_TOL = _T.bayes
ASSOC_TOL = _T.associativity
TRANSPOSE_TOL = _T.transpose
RELATION_TOL = _T.defining_relation
INVOLUTION_TOL = _T.involution
ADJOINT_TOL = _T.adjoint
PSD_FACTOR = _T.gram_psd_factor
LEFT_IDEAL_TOL = _T.left_ideal
REPRESENTATION_TOL = _T.representation
CSTAR_TOL = _T.cstar
CAUCHY_SCHWARZ_TOL = _T.cauchy_schwarz
BORN_TOL = _T.born
ROUNDTRIP_TOL = _T.roundtrip


def seeds(seed: int, n: int):
    return np.random.SeedSequence(seed).spawn(n)


def require_form(theory: Theory) -> np.ndarray:
    if theory.faithful is None:
        raise InputError(f"theory {theory.name!r} declares no faithful_state")
    return np.asarray(theory.faithful)


def _worst(values) -> float:
    values = list(values)
    return float(max(values)) if values else 0.0


def _diff(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


# ---------------------------------------------------------------------------


def validate_suite(theory: Theory, samples: int = 100, seed: int = 0, tol: float = 1e-9):
    checks = validate_theory(theory, tol)
    children = seeds(seed, 4 * samples)
    maps = [models.random_transformation(children[k], theory) for k in range(2 * samples)]
    states = [models.random_state(children[2 * samples + k], theory) for k in range(samples)]
    e = theory.unit_effect

    bayes = []
    for k in range(samples):
        A, B, s = maps[2 * k], maps[2 * k + 1], states[k]
        pa = probability(s, effect_of(A, theory), tol)
        if pa <= tol:
            continue
        cond, _ = conditional_state(s, A, theory, tol)
        joint = probability(s, effect_of(compose(B, A), theory), tol)
        bayes.append(abs(joint - probability(cond, effect_of(B, theory), tol) * pa))
    checks.append(check("bayes-chaining", _worst(bayes), BAYES_TOL, samples=len(bayes)))

    assoc = [
        _diff(compose(compose(maps[k], maps[k + 1]), maps[k + 2]), compose(maps[k], compose(maps[k + 1], maps[k + 2])))
        for k in range(samples)
    ]
    checks.append(check("monoid-associativity", _worst(assoc), ASSOC_TOL))
    neutral = [max(_diff(compose(theory.identity, A), A), _diff(compose(A, theory.identity), A)) for A in maps]
    checks.append(check("monoid-identity", _worst(neutral), 0.0))

    rng = models.rng_for(children[-1])
    convex = []
    for k in range(samples):
        lam = rng.uniform()
        convex.append(cone_violation(theory, lam * maps[k] + (1 - lam) * maps[samples + k]))
    checks.append(check("convexity-closure", _worst(convex), tol))
    checks.append(check("random-transformations-physical", _worst(cone_violation(theory, A) for A in maps), tol))

    if theory.cone.kind == "quantum-choi":
        add = [
            _diff(quantum.choi_from_ptm(maps[k] + maps[k + 1]), quantum.choi_from_ptm(maps[k]) + quantum.choi_from_ptm(maps[k + 1]))
            for k in range(samples)
        ]
        back = [_diff(quantum.ptm_from_choi(quantum.choi_from_ptm(A)), A) for A in maps[:samples]]
        checks.append(check("ptm-choi-additivity", _worst(add), 1e-12))
        checks.append(check("ptm-choi-roundtrip", _worst(back), 1e-12))
    data = {"effect_dim": theory.effect_dim, "unit_effect": e, "cone": theory.cone.kind}
    return checks, data


def transpose_suite(theory: Theory, samples: int = 100, seed: int = 0, tol: float = 1e-9, name: str | None = None):
    F = require_form(theory)
    checks = [check("form-symmetric-exact", _diff(F, F.T), 0.0)]
    maps = [models.random_transformation(s, theory) for s in seeds(seed, samples)]
    Tp = [bipartite.transpose(A, F, tol) for A in maps]
    relation = [_diff(A @ F, F @ At.T) for A, At in zip(maps, Tp)]
    twice = [_diff(bipartite.transpose(At, F, tol), A) for A, At in zip(maps, Tp)]
    anti = [
        _diff(bipartite.transpose(compose(maps[k], maps[k - 1]), F, tol), compose(Tp[k - 1], Tp[k]))
        for k in range(len(maps))
    ]
    additive = [
        _diff(bipartite.transpose(maps[k] + maps[k - 1], F, tol), Tp[k] + Tp[k - 1]) for k in range(len(maps))
    ]
    checks += [
        check("transpose-defining-relation", _worst(relation), RELATION_TOL, samples=samples),
        check("transpose-involutive", _worst(twice), TRANSPOSE_TOL),
        check("transpose-anti-homomorphism", _worst(anti), TRANSPOSE_TOL),
        check("transpose-additive", _worst(additive), TRANSPOSE_TOL),
        check("transpose-identity", _diff(bipartite.transpose(theory.identity, F, tol), theory.identity), TRANSPOSE_TOL),
    ]
    if theory.cone.kind == "quantum-choi":
        n = theory.cone.hilbert_dim
        us = [models.random_unitary(n, models.rng_for(s)) for s in seeds(seed + 1, 20)]
        oracle = [_diff(bipartite.transpose(models.unitary_channel(U), F, tol), models.unitary_channel(U.T)) for U in us]
        checks.append(check("transpose-unitary-oracle", _worst(oracle), TRANSPOSE_TOL, samples=len(us)))
    data = {}
    if name is not None:
        A = theory.transformation(name)
        data["transformation"] = name
        data["matrix"] = A
        data["transposed"] = bipartite.transpose(A, F, tol)
    return checks, data


def faithful_suite(theory: Theory, tol: float = 1e-9):
    F = require_form(theory)
    checks = bipartite.faithfulness_checks(F, theory, tol)
    rep = bipartite.is_dynamically_faithful(F, tol)
    data = {"rank": rep.rank, "singular_values": rep.singular_values}
    if rep.faithful:
        inv = gns.sign_involution(F, tol)
        lo = float(np.linalg.eigvalsh(inv.abs_form)[0])
        checks.append(Check("abs-form-strictly-positive", PASS if lo > tol else FAIL, lo, CLAIM))
        data["abs_form_min_eigenvalue"] = lo
    return checks, data


def gns_suite(theory: Theory, samples: int = 100, seed: int = 0, tol: float = 1e-9, null_factor: float = gns.NULL_FACTOR):
    F = require_form(theory)
    d = theory.effect_dim
    inv = gns.sign_involution(F, tol)
    S = inv.S
    checks = [
        check("sign-involution-squares-to-identity", _diff(S @ S, np.eye(d)), INVOLUTION_TOL),
        check("sign-involution-symmetric", _diff(S, S.T), INVOLUTION_TOL),
    ]
    abs_min = float(np.linalg.eigvalsh(inv.abs_form)[0])
    checks.append(Check("abs-form-positive-definite", PASS if abs_min > tol else FAIL, abs_min, CLAIM))

    children = seeds(seed, 2 * samples)
    elems = [models.random_element(s, theory) for s in children]
    A_s, B_s = elems[:samples], elems[samples:]
    adj = lambda X: gns.adjoint(X, F, S, tol)  # noqa: E731
    checks += [
        check("adjoint-involutive", _worst(_diff(adj(adj(A)), A) for A in A_s), ADJOINT_TOL, samples=samples),
        check(
            "adjoint-reverses-composition",
            _worst(_diff(adj(A @ B), adj(B) @ adj(A)) for A, B in zip(A_s, B_s)),
            ADJOINT_TOL,
        ),
        check("adjoint-identity", _diff(adj(theory.identity), theory.identity), ADJOINT_TOL),
        check(
            "conjugation-involutive",
            _worst(_diff(gns.conjugate_transformation(gns.conjugate_transformation(A, S), S), A) for A in A_s),
            INVOLUTION_TOL,
        ),
        check(
            "conjugation-antilinear",
            _worst(
                _diff(gns.conjugate_transformation(1j * A, S), -1j * gns.conjugate_transformation(A, S)) for A in A_s
            ),
            INVOLUTION_TOL,
        ),
    ]

    S_cpl = S.astype(complex)
    G = gns.gram_matrix(gns.matrix_units(d), F, S_cpl, theory.unit_effect, tol)
    herm = _diff(G, G.conj().T)
    checks.append(check("gram-hermitian", herm, tol, category=CLAIM))
    w = np.linalg.eigvalsh(0.5 * (G + G.conj().T))
    checks.append(check("gram-psd", max(0.0, -w[0] / w[-1]), PSD_FACTOR, category=CLAIM, min=w[0], max=w[-1]))

    space = gns.build_gns(F, theory.unit_effect, tol, null_factor)
    generators = [theory.identity, *theory.transformations.values()]
    checks.append(check("null-space-left-ideal", gns.left_ideal_residual(space, generators), LEFT_IDEAL_TOL, category=CLAIM))

    pi = lambda X: gns.representation(X, space)  # noqa: E731
    hom = [_diff(pi(A @ B), pi(A) @ pi(B)) for A, B in zip(A_s, B_s)]
    compat = [_diff(pi(adj(A)), pi(A).conj().T) for A in A_s]
    checks += [
        check("representation-homomorphism", _worst(hom), REPRESENTATION_TOL, category=CLAIM, samples=samples),
        check("representation-adjoint-compatible", _worst(compat), REPRESENTATION_TOL, category=CLAIM),
        check("representation-identity", _diff(pi(theory.identity), np.eye(space.dim)), REPRESENTATION_TOL, category=CLAIM),
    ]

    eff_dep, eff_dirs = gns.class_dependence(space, gns.effect_constraints(space))
    teff_dep, teff_dirs = gns.class_dependence(space, gns.transposed_effect_constraints(space))
    level = [abs(space.inner(A, B) - gns.effect_level_product(A, B, space)) for A, B in zip(A_s, B_s)]
    checks += [
        info("quotient-dimension-vs-effect-dimension", abs(space.dim - d), dim_H=space.dim, effect_dim=d, identified=space.dim == d),
        info("effect-class-representative-independence", eff_dep, zero_effect_directions_with_norm=eff_dirs),
        info("transposed-effect-class-representative-independence", teff_dep, directions_with_norm=teff_dirs),
        info("effect-level-scalar-product-formula", _worst(level), samples=samples),
    ]
    data = {
        "form_eigenvalues": inv.eigenvalues,
        "sign_involution": S,
        "gram_spectrum": space.quotient.eigenvalues,
        "dim_H": space.dim,
        "effect_dim": d,
        "identified": space.dim == d,
        "null_factor": null_factor,
    }
    return checks, data


def cstar_suite(theory: Theory, samples: int = 50, seed: int = 0, tol: float = 1e-9):
    F = require_form(theory)
    space = gns.build_gns(F, theory.unit_effect, tol)
    children = seeds(seed, 2 * samples + 1)
    elems = [models.random_element(s, theory) for s in children[:-1]]
    A_s, B_s = elems[:samples], elems[samples:]
    residuals = [gns.cstar_check(A, space) for A in A_s]
    rng = models.rng_for(children[-1])
    homog = []
    for A in A_s:
        lam = rng.normal() * 3
        na = gns.operator_norm(A, space)
        homog.append(abs(gns.operator_norm(lam * A, space) - abs(lam) * na) / max(1.0, abs(lam) * na))
    cs = []
    for A, B in zip(A_s, B_s):
        lhs = abs(space.inner(A, B))
        rhs = np.sqrt(space.inner(A, A).real) * np.sqrt(space.inner(B, B).real)
        cs.append(max(0.0, lhs - rhs))
    checks = [
        check("cstar-identity", _worst(residuals), CSTAR_TOL, category=CLAIM, samples=samples),
        check("norm-of-identity", abs(gns.operator_norm(theory.identity, space) - 1.0), 1e-12, category=CLAIM),
        check("norm-homogeneity", _worst(homog), 1e-12, category=CLAIM),
        check("cauchy-schwarz", _worst(cs), CAUCHY_SCHWARZ_TOL, category=CLAIM),
    ]
    data = {"residuals": residuals, "norms": [gns.operator_norm(A, space) for A in A_s]}
    return checks, data


def born_cases(theory: Theory, trials: int, seed: int):
    """(state, A, B) triples: fixed cases first, then seeded random ones."""
    F = require_form(theory)
    cases = [("marginal-of-form", bipartite.local_state(F, theory.unit_effect, 2))]
    cases += [(f"extremal[{k}]", s) for k, s in theory.extremal_states.items()]
    out = []
    children = seeds(seed, 3 * trials)
    for k, (label, s) in enumerate(cases):
        out.append((label, s, theory.identity, theory.identity))
    for k in range(trials):
        s = models.random_state(children[3 * k], theory)
        A = models.random_transformation(children[3 * k + 1], theory)
        B = models.random_transformation(children[3 * k + 2], theory)
        out.append((f"random[{k}]", s, A, B))
    return out


def born_suite(theory: Theory, trials: int = 20, seed: int = 0, tol: float = 1e-9):
    F = require_form(theory)
    space = gns.build_gns(F, theory.unit_effect, tol)
    e = theory.unit_effect
    direct_err, cond_err, rows = [], [], []
    gens = list(theory.transformations.values())
    for label, s, A, B in born_cases(theory, trials, seed):
        bs = gns.born_state(s, theory, space)
        pairs = [(A, B)] if label.startswith("random") else [(A, B), *[(g, gens[0]) for g in gens]]
        for X, Y in pairs:
            direct_err.append(abs(gns.born_probability(X, bs.rho, space) - float(e @ X @ s)))
            cond_err.append(abs(gns.born_conditioned(Y, X, bs.rho, space) - float(e @ Y @ X @ s)))
        rows.append({"case": label, "preparation_probability": bs.probability})
    checks = [
        check("born-rule", _worst(direct_err), BORN_TOL, category=CLAIM, evaluations=len(direct_err)),
        check("born-rule-conditioned", _worst(cond_err), BORN_TOL, category=CLAIM, evaluations=len(cond_err)),
        check("born-normalization", abs(gns.born_probability(theory.identity, gns.born_state(
            bipartite.local_state(F, e, 2), theory, space).rho, space) - 1.0), BORN_TOL, category=CLAIM),
    ]
    return checks, {"cases": rows}


def calibrate_suite(
    theory: Theory,
    name: str,
    shots: int = 10**6,
    seed: int = 42,
    samples: int = 50,
    tol: float = 1e-9,
    max_error: float | None = None,
):
    F = require_form(theory)
    f = models.default_fiducials(theory)
    roundtrip = []
    for s in seeds(seed, samples):
        R = models.random_transformation(s, theory)
        p = calibration.outcome_probabilities(F, R, f, f)
        roundtrip.append(_diff(calibration.estimate_transformation(p, F, f, f, tol=tol), R))
    checks = [check("noiseless-roundtrip", _worst(roundtrip), ROUNDTRIP_TOL, category=CLAIM, samples=samples)]
    R = theory.transformation(name)
    run = calibration.calibrate(theory, R, shots, seed, f, f, tol)
    err = run.errors["frobenius"]
    if max_error is None:
        checks.append(info("estimation-error", err, shots=shots, **run.errors))
    else:
        checks.append(check("estimation-error", err, max_error, category=CLAIM, shots=shots))
    data = {
        "transformation": name,
        "shots": shots,
        "missed": run.missed,
        "estimate": run.estimate,
        "errors": run.errors,
    }
    return checks, data, run
