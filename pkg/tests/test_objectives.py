import numpy as np
import pytest

from hybridrbf import (
    ConfigError,
    DomainError,
    EvaluationGrid,
    KernelSpec,
    ObjectiveSpec,
    PointSet,
    SENTINEL_COST,
    fit,
    kernel_objective,
    loocv_cost_brute,
    loocv_cost_rippa,
    make_evaluation_grid,
    make_tensor_grid,
    objective_value,
    rms_error,
)
from hybridrbf.bench import franke

E_INV = 0.36787944117144233


def franke_data(k: int) -> PointSet:
    grid = make_tensor_grid(k, 2)
    return grid.with_values(franke(grid.coords[:, 0], grid.coords[:, 1]))


def test_rms_zero_when_model_is_truth():
    pts = franke_data(5)
    model = fit(pts, KernelSpec.hybrid(3.0, 0.8, 1e-3))
    grid = EvaluationGrid(pts.coords)
    assert rms_error(model, grid, pts.values) <= 1e-10


def test_rms_constant_residual():
    # model fitted to zeros predicts zero everywhere
    model = fit(PointSet([[0.5]], [0.0]), KernelSpec.gaussian(1.0))
    grid = EvaluationGrid(np.linspace(0, 1, 7)[:, None])
    assert rms_error(model, grid, np.full(7, -0.1)) == pytest.approx(0.1, rel=1e-14)


def test_rms_hand_value():
    model = fit(PointSet([[0.5]], [0.0]), KernelSpec.gaussian(1.0))
    grid = EvaluationGrid([[0.0], [1.0]])
    # residuals (3, 4) over M = 2: sqrt(12.5)
    assert rms_error(model, grid, [-3.0, -4.0]) == pytest.approx(
        3.5355339059327378, rel=1e-15
    )


def test_rms_length_mismatch():
    model = fit(PointSet([[0.5]], [0.0]), KernelSpec.gaussian(1.0))
    grid = EvaluationGrid([[0.0], [1.0]])
    with pytest.raises(DomainError):
        rms_error(model, grid, [1.0])


def test_rms_invariant_under_grid_permutation():
    pts = franke_data(4)
    model = fit(pts, KernelSpec.hybrid(2.0, 0.7, 0.1))
    grid = make_evaluation_grid(8)
    truth = franke(grid.points[:, 0], grid.points[:, 1])
    rng = np.random.default_rng(3)
    perm = rng.permutation(grid.m)
    shuffled = EvaluationGrid(grid.points[perm])
    assert rms_error(model, shuffled, truth[perm]) == pytest.approx(
        rms_error(model, grid, truth), rel=1e-12
    )


def test_rippa_two_point_symmetry():
    pts = PointSet([[-1.0], [1.0]], [1.0, 1.0])
    cost = loocv_cost_rippa(pts, KernelSpec.gaussian(1.0))
    assert cost.per_point_errors[0] == pytest.approx(cost.per_point_errors[1], rel=1e-14)


def test_brute_two_point_oracle():
    pts = PointSet([[0.0], [1.0]], [1.0, 0.0])
    cost = loocv_cost_brute(pts, KernelSpec.gaussian(1.0))
    # leave-one-out fits are single-kernel models, solvable by hand
    assert cost.per_point_errors[0] == pytest.approx(1.0, abs=1e-15)
    assert cost.per_point_errors[1] == pytest.approx(-E_INV, abs=1e-15)
    assert cost.value == pytest.approx(np.hypot(1.0, E_INV), rel=1e-15)


def test_rippa_matches_brute_on_random_points():
    rng = np.random.default_rng(77)
    pts = PointSet(rng.uniform(0, 1, (25, 2)), rng.normal(size=25))
    kernel = KernelSpec.hybrid(3.0, 0.7, 0.3)
    shortcut = loocv_cost_rippa(pts, kernel).per_point_errors
    brute = loocv_cost_brute(pts, kernel).per_point_errors
    rel = np.max(np.abs(shortcut - brute)) / np.max(np.abs(brute))
    assert rel <= 1e-8


def test_loocv_positive_for_constant_data_gaussian():
    pts = make_tensor_grid(4, 2).with_values(np.ones(16))
    cost = loocv_cost_rippa(pts, KernelSpec.gaussian(2.0))
    assert cost.value > 0.0


def test_brute_zero_data_zero_cost():
    pts = PointSet([[0.0], [1.0]], [0.0, 0.0])
    assert loocv_cost_brute(pts, KernelSpec.gaussian(1.0)).value == 0.0


def test_loocv_minimum_sizes():
    single = PointSet([[0.0]], [1.0])
    with pytest.raises(DomainError):
        loocv_cost_rippa(single, KernelSpec.gaussian(1.0))
    small = PointSet([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [1.0, 2.0, 3.0])
    with pytest.raises(DomainError):
        loocv_cost_brute(small, KernelSpec.gaussian(1.0), augmented=True)


def test_loocv_cost_invariant_under_relabeling():
    rng = np.random.default_rng(8)
    pts = PointSet(rng.uniform(0, 1, (16, 2)), rng.normal(size=16))
    kernel = KernelSpec.hybrid(2.0, 0.8, 0.2)
    base = loocv_cost_rippa(pts, kernel)
    perm = rng.permutation(16)
    permuted = PointSet(pts.coords[perm], pts.values[perm])
    cost = loocv_cost_rippa(permuted, kernel)
    assert cost.value == pytest.approx(base.value, rel=1e-9)
    assert np.allclose(cost.per_point_errors, base.per_point_errors[perm], rtol=1e-8, atol=1e-12)


def test_objective_value_rms_path():
    pts = franke_data(4)
    grid = EvaluationGrid(pts.coords)
    spec = ObjectiveSpec.rms(grid, pts.values)
    assert objective_value(spec, pts, KernelSpec.hybrid(3.0, 0.8, 1e-3)) <= 1e-10


def test_objective_value_sentinel_on_singular():
    pts = franke_data(5)
    spec = ObjectiveSpec.loocv()
    assert objective_value(spec, pts, KernelSpec.gaussian(1e-4)) == SENTINEL_COST
    spec_rms = ObjectiveSpec.rms(EvaluationGrid(pts.coords), pts.values)
    assert objective_value(spec_rms, pts, KernelSpec.gaussian(1e-4)) == SENTINEL_COST


def test_objective_value_loocv_ordering_matches_brute():
    pts = franke_data(5)
    spec = ObjectiveSpec.loocv()
    good = KernelSpec.hybrid(3.0, 0.8, 0.01)
    bad = KernelSpec.hybrid(15.0, 1.0, 0.0)  # too spiky, but still solvable
    brute_good = loocv_cost_brute(pts, good).value
    brute_bad = loocv_cost_brute(pts, bad).value
    assert brute_good < brute_bad
    assert objective_value(spec, pts, good) < objective_value(spec, pts, bad)


def test_objective_value_loocv_augmented_uses_brute():
    pts = franke_data(4)
    spec = ObjectiveSpec.loocv(augmented=True)
    kernel = KernelSpec.hybrid(2.0, 0.7, 0.1)
    assert objective_value(spec, pts, kernel) == pytest.approx(
        loocv_cost_brute(pts, kernel, augmented=True).value, rel=1e-12
    )


def test_objective_value_always_finite():
    pts = franke_data(4)
    spec = ObjectiveSpec.loocv()
    rng = np.random.default_rng(12)
    for _ in range(20):
        kernel = KernelSpec.hybrid(
            float(rng.uniform(1e-4, 20)), float(rng.uniform(0, 1)), float(rng.uniform(0, 1))
        )
        value = objective_value(spec, pts, kernel)
        assert np.isfinite(value)


def test_objective_spec_validation():
    with pytest.raises(ConfigError):
        ObjectiveSpec("rms")
    with pytest.raises(ConfigError):
        ObjectiveSpec("nope")
    grid = make_evaluation_grid(3)
    with pytest.raises(ConfigError):
        ObjectiveSpec.rms(grid, np.zeros(5))


def test_kernel_objective_zero_weights_sentinel():
    pts = franke_data(4)
    objective = kernel_objective(ObjectiveSpec.loocv(), pts)
    assert objective(np.array([1.0, 0.0, 0.0])) == SENTINEL_COST
    assert objective(np.array([3.0, 0.8, 0.01])) < SENTINEL_COST
