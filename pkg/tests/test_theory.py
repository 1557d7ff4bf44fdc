import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optheory import models
from optheory.errors import CoexistenceError, InputError, ZeroProbabilityError
from optheory.theory import (
    add_transformations,
    are_coexistent,
    compose,
    conditional_state,
    dynamically_equivalent,
    effect_of,
    in_cone,
    informationally_equivalent,
    is_informationally_complete,
    is_minimal_informationally_complete,
    is_observable,
    probability,
    scale,
    validate_theory,
)

from . import oracles

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.fixture(scope="module")
def bit():
    return models.build_classical(2)


@pytest.fixture(scope="module")
def qubit():
    return models.build_qubit()


def _by_name(checks):
    return {c.name: c for c in checks}


# validate_theory


def test_classical_bit_validates_with_zero_residual(bit):
    checks = validate_theory(bit)
    assert all(c.passed for c in checks)
    assert max(c.residual for c in checks) == 0.0


def test_qubit_validates(qubit):
    checks = validate_theory(qubit)
    assert all(c.passed for c in checks)
    assert max(c.residual for c in checks) <= 1e-12


def test_doubled_identity_breaks_neutrality(qubit):
    broken = dataclasses.replace(qubit, identity=2 * np.eye(4))
    checks = _by_name(validate_theory(broken))
    assert checks["identity-neutrality"].verdict == "fail"
    # e @ (2I) - e = e, whose largest entry is 2
    assert checks["identity-neutrality"].residual == pytest.approx(2.0)


def test_incomplete_experiment_reported(bit):
    broken = dataclasses.replace(bit, experiments={"half": ("select_0",)})
    checks = _by_name(validate_theory(broken))
    assert checks["experiment-completeness"].verdict == "fail"


def test_dimension_mismatch_is_input_error(bit):
    with pytest.raises(InputError):
        dataclasses.replace(bit, identity=np.eye(3))
    with pytest.raises(InputError):
        probability(np.ones(2), np.ones(3))


# probability / effects


def test_unit_effect_has_probability_one(qubit):
    for s in qubit.extremal_states.values():
        assert probability(s, qubit.unit_effect) == pytest.approx(1.0, abs=1e-15)


def test_disjoint_classical_support():
    assert probability(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0


def test_maximally_mixed_projector_probability():
    s = np.array([0.5, 0, 0, 0])
    a = oracles.pauli_coords_effect(np.diag([1.0, 0.0]).astype(complex))
    np.testing.assert_array_equal(a, [1, 0, 0, 1])
    assert probability(s, a) == pytest.approx(0.5)
    # density-matrix oracle
    assert np.trace(np.eye(2) / 2 @ np.diag([1.0, 0.0])).real == pytest.approx(0.5)


def test_out_of_range_probability_warns():
    with pytest.warns(RuntimeWarning):
        probability(np.array([1.0, 0.0]), np.array([2.0, 0.0]))


def test_effect_of_examples(bit, qubit):
    np.testing.assert_array_equal(effect_of(bit.identity, bit), bit.unit_effect)
    np.testing.assert_array_equal(effect_of(np.diag([1.0, 0.0]), bit), [1.0, 0.0])
    np.testing.assert_array_equal(effect_of(np.diag([1.0, 0, 0, 0]), qubit), [2.0, 0, 0, 0])


# conditioning and composition


def test_condition_on_identity(qubit):
    s = qubit.extremal_states["x+"]
    out, p = conditional_state(s, qubit.identity, qubit)
    np.testing.assert_allclose(out, s)
    assert p == pytest.approx(1.0)


def test_classical_bayes_update(bit):
    out, p = conditional_state(np.array([0.5, 0.5]), np.diag([1.0, 0.0]), bit)
    np.testing.assert_allclose(out, [1.0, 0.0])
    assert p == pytest.approx(0.5)


def test_zero_probability_conditioning(qubit):
    s = np.array([0.5, 0, 0, 0])
    with pytest.raises(ZeroProbabilityError):
        conditional_state(s, 0 * qubit.identity, qubit)
    with pytest.raises(ZeroProbabilityError):
        conditional_state(qubit.extremal_states["z+"], qubit.transformations["meas_z1"], qubit)


def test_compose_order_and_neutrality(bit, qubit):
    A = np.array([[0.5, 0.2], [0.1, 0.3]])
    B = np.array([[0.0, 1.0], [0.4, 0.0]])
    assert np.array_equal(compose(bit.identity, A), A)
    assert np.array_equal(compose(A, bit.identity), A)
    # hand product: compose(A, B) is the matrix of "B first, then A" = A @ B
    np.testing.assert_allclose(compose(A, B), [[0.08, 0.5], [0.12, 0.1]])
    flip = qubit.transformations["flip_x"]
    np.testing.assert_allclose(compose(flip, flip), np.eye(4), atol=1e-15)


def test_sum_and_scale(bit):
    A = bit.transformations["select_0"]
    assert np.array_equal(add_transformations(A, np.zeros((2, 2))), A)
    total = add_transformations(bit.transformations["select_0"], bit.transformations["select_1"], bit)
    np.testing.assert_array_equal(effect_of(total, bit), bit.unit_effect)
    half = scale(0.5, bit.transformations["cycle"])
    for s in bit.extremal_states.values():
        assert probability(s, effect_of(half, bit)) == pytest.approx(
            0.5 * probability(s, effect_of(bit.transformations["cycle"], bit))
        )
    with pytest.raises(CoexistenceError):
        add_transformations(bit.identity, bit.identity, bit)
    with pytest.raises(InputError):
        scale(1.5, A, physical=True)


def test_coexistence_examples(bit):
    A = bit.transformations["select_0"]
    assert are_coexistent(A, np.zeros((2, 2)), bit)
    assert are_coexistent(A, bit.transformations["select_1"], bit)
    assert not are_coexistent(bit.identity, bit.identity, bit)


def test_equivalences(bit, qubit):
    A = bit.transformations["cycle"]
    assert informationally_equivalent(A, A, bit) and dynamically_equivalent(A, A, bit)
    R1 = np.array([[0.0, 1.0], [0.0, 0.0]])
    R2 = np.array([[0.0, 0.0], [0.0, 1.0]])
    assert informationally_equivalent(R1, R2, bit)
    assert not dynamically_equivalent(R1, R2, bit)
    U = qubit.transformations["ry"]
    assert dynamically_equivalent(U, 0.5 * U, qubit)
    assert not informationally_equivalent(U, 0.5 * U, qubit)


def test_observables(bit, qubit):
    assert is_observable([qubit.unit_effect], qubit)
    assert not is_informationally_complete([qubit.unit_effect], qubit)
    sic = models.tetrahedral_fiducials()
    assert is_observable(list(sic), qubit)
    assert oracles.numeric_rank(sic) == 4
    assert is_informationally_complete(list(sic), qubit)
    assert is_minimal_informationally_complete(list(sic), qubit)
    pauli6 = models.pauli_fiducials()
    assert is_informationally_complete(list(pauli6), qubit)
    assert not is_minimal_informationally_complete(list(pauli6), qubit)
    points = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    assert is_observable(points, bit) and is_minimal_informationally_complete(points, bit)


def test_single_level_theory_is_trivially_valid():
    th = models.build_classical(1)
    assert all(c.passed for c in validate_theory(th))


# properties


@pytest.mark.parametrize("model", ["classical2", "classical3", "qubit"])
@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_bayes_chaining(model, seed):
    th = models.build_model(model)
    ss = np.random.SeedSequence(seed).spawn(3)
    A = models.random_transformation(ss[0], th)
    B = models.random_transformation(ss[1], th)
    s = models.random_state(ss[2], th)
    pa = probability(s, effect_of(A, th))
    if pa <= 1e-9:
        return
    cond, p = conditional_state(s, A, th)
    lhs = probability(s, effect_of(compose(B, A), th))
    assert abs(lhs - probability(cond, effect_of(B, th)) * p) <= 1e-10


@pytest.mark.parametrize("model", ["classical2", "qubit"])
@settings(max_examples=40, deadline=None)
@given(seed=seeds, lam=st.floats(0, 1))
def test_convex_combinations_stay_physical(model, seed, lam):
    th = models.build_model(model)
    a, b = np.random.SeedSequence(seed).spawn(2)
    A = models.random_transformation(a, th)
    B = models.random_transformation(b, th)
    assert in_cone(th, lam * A + (1 - lam) * B)


@pytest.mark.parametrize("model", ["classical3", "qubit"])
@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_monoid_laws(model, seed):
    th = models.build_model(model)
    A, B, C = (models.random_transformation(s, th) for s in np.random.SeedSequence(seed).spawn(3))
    assert np.max(np.abs(compose(compose(A, B), C) - compose(A, compose(B, C)))) <= 1e-12
    assert np.array_equal(compose(th.identity, A), A)
    assert np.array_equal(compose(A, th.identity), A)


def test_declared_experiments_complete(qubit, bit):
    for th in (qubit, bit):
        for members in th.experiments.values():
            total = sum(effect_of(th.transformations[m], th) for m in members)
            assert np.max(np.abs(total - th.unit_effect)) <= 1e-10


def test_hull_cone_membership():
    bit = models.build_classical(2)
    hull = dataclasses.replace(bit, cone=dataclasses.replace(bit.cone, kind="hull"))
    assert in_cone(hull, 0.3 * hull.transformations["select_0"] + 0.6 * hull.transformations["cycle"])
    assert not in_cone(hull, -0.1 * hull.identity)
    assert not in_cone(hull, 2 * hull.identity)
    assert all(c.passed for c in validate_theory(hull))
