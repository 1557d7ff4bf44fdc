import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optheory import calibration, models
from optheory.calibration import (
    calibrate,
    counts_from_csv,
    counts_to_csv,
    estimate_transformation,
    estimation_error,
    outcome_probabilities,
    simulate_outcomes,
)
from optheory.errors import IdentifiabilityError, InputError
from optheory.theory import in_cone

from . import oracles


@pytest.fixture(scope="module")
def qubit():
    return models.build_qubit()


def _pauli_branch_operators():
    return [0.5 * (np.eye(2) + s * P) for P in oracles.PAULIS[1:] for s in (1, -1)]


def test_identity_table_matches_bell_statistics(qubit):
    f = models.pauli_fiducials()
    p = outcome_probabilities(qubit.faithful, qubit.identity, f, f)
    ops = [E / 3 for E in _pauli_branch_operators()]
    expected = np.array([[oracles.bell_joint_probability(E1, E2) for E2 in ops] for E1 in ops])
    np.testing.assert_allclose(p, expected, atol=1e-15)
    assert p.sum() == pytest.approx(1.0)


def test_zero_shots_gives_empty_counts(qubit):
    f = models.pauli_fiducials()
    counts, missed = simulate_outcomes(qubit.faithful, qubit.identity, f, f, 0, seed=1)
    assert counts.shape == (6, 6) and counts.sum() == 0 and missed == 0
    with pytest.raises(InputError):
        simulate_outcomes(qubit.faithful, qubit.identity, f, f, -1, seed=1)


def test_counts_sum_to_shots_and_track_missed_runs(qubit):
    f = models.pauli_fiducials()
    A = qubit.transformations["meas_z0"]
    counts, missed = simulate_outcomes(qubit.faithful, A, f, f, 10_000, seed=3)
    assert counts.sum() + missed == 10_000
    assert missed / 10_000 == pytest.approx(0.5, abs=0.03)


def test_frequencies_approach_probabilities(qubit):
    f = models.pauli_fiducials()
    A = qubit.transformations["rx"]
    counts, _ = simulate_outcomes(qubit.faithful, A, f, f, 400_000, seed=9)
    p = outcome_probabilities(qubit.faithful, A, f, f)
    assert np.max(np.abs(counts / 400_000 - p)) < 5 * np.sqrt(0.25 / 400_000)


def test_simulation_is_deterministic(qubit):
    f = models.pauli_fiducials()
    a = simulate_outcomes(qubit.faithful, qubit.transformations["ry"], f, f, 1000, seed=42)
    b = simulate_outcomes(qubit.faithful, qubit.transformations["ry"], f, f, 1000, seed=42)
    assert a[0].tobytes() == b[0].tobytes() and a[1] == b[1]


@pytest.mark.parametrize("name", ["classical2", "classical3", "qubit"])
@settings(max_examples=30, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_noiseless_roundtrip(name, seed):
    th = models.build_model(name)
    f = models.default_fiducials(th)
    R = models.random_transformation(seed, th)
    p = outcome_probabilities(th.faithful, R, f, f)
    assert np.max(np.abs(estimate_transformation(p, th.faithful, f, f) - R)) <= 1e-10


def test_tetrahedral_fiducials_also_identify(qubit):
    f = models.tetrahedral_fiducials()
    R = qubit.transformations["rx"]
    p = outcome_probabilities(qubit.faithful, R, f, f)
    np.testing.assert_allclose(estimate_transformation(p, qubit.faithful, f, f), R, atol=1e-10)


def test_unidentifiable_setups(qubit):
    f = models.pauli_fiducials()
    with pytest.raises(IdentifiabilityError):
        estimate_transformation(np.zeros((6, 6)), np.diag([0.25, 0.25, 0.0, 0.25]), f, f)
    z_only = f[4:]
    with pytest.raises(IdentifiabilityError):
        estimate_transformation(np.zeros((2, 6)), qubit.faithful, z_only, f)
    with pytest.raises(InputError):
        estimate_transformation(np.zeros((6, 6)), qubit.faithful, f, f, shots=0)


def test_estimation_error_examples(qubit):
    R = qubit.transformations["ry"]
    assert estimation_error(R, R)["frobenius"] == 0.0
    bumped = R.copy()
    bumped[0, 0] += 1e-3
    assert estimation_error(bumped, R)["frobenius"] == pytest.approx(1e-3)
    out = estimation_error(bumped, R, qubit.state_matrix, qubit.unit_effect)
    # the unit effect picks up 2e-3 in its first entry; every state has s_0 = 1/2
    assert out["worst_probability_deviation"] == pytest.approx(1e-3)


def test_x_rotation_at_a_million_shots(qubit):
    run = calibrate(qubit, qubit.transformations["rx"], 10**6, seed=42)
    assert run.counts.sum() + run.missed == 10**6
    assert run.errors["frobenius"] < 0.01


def _median_error(th, R, shots, n_seeds=10):
    return float(np.median([calibrate(th, R, shots, seed=s).errors["frobenius"] for s in range(n_seeds)]))


def test_error_scales_like_inverse_square_root(qubit):
    R = qubit.transformations["rx"]
    ratio = _median_error(qubit, R, 10**6) / _median_error(qubit, R, 10**4)
    assert 0.1 / 3 <= ratio <= 0.1 * 3


def test_error_decays_monotonically(qubit):
    R = qubit.transformations["depolarize"]
    errs = [_median_error(qubit, R, n) for n in (10**3, 10**4, 10**5, 10**6)]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_cone_projection_is_optional(qubit):
    R = qubit.transformations["meas_x0"]
    raw = calibrate(qubit, R, 2000, seed=5)
    proj = calibrate(qubit, R, 2000, seed=5, project=True)
    assert in_cone(qubit, proj.estimate)
    assert not np.array_equal(raw.estimate, proj.estimate)
    bit = models.build_classical(3)
    P = calibration.project_to_cone(bit, np.array([[1.2, -0.1, 0], [0.1, 0.5, 0], [0, 0.6, 1]]))
    assert in_cone(bit, P)


def test_counts_csv_roundtrip():
    counts = np.arange(12).reshape(3, 4)
    text = counts_to_csv(counts, 7)
    assert text.splitlines()[0] == "i,j,count"
    assert text.splitlines()[-1] == "-1,-1,7"
    back, missed = counts_from_csv(text, (3, 4))
    np.testing.assert_array_equal(back, counts)
    assert missed == 7
    with pytest.raises(InputError):
        counts_from_csv("a,b,c\n1,2,3\n", (3, 4))
