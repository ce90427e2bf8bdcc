"""Objective functions for kernel-parameter search.

Two costs are supported: the exact RMS error against a known truth on an
evaluation grid, and the leave-one-out cross-validation (LOOCV) cost, which
needs no truth.  LOOCV errors come from Rippa's shortcut

    e_k = c_k / (A**-1)_kk

using one full-data factorization; a brute-force variant that actually
refits N reduced systems serves as the independent oracle and as the
fallback for augmented fits, where the shortcut is not established.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import (
    ConfigError,
    DomainError,
    NumericalBreakdownError,
    SingularSystemError,
)
from .geometry import EvaluationGrid, PointSet
from .interpolation import (
    InterpolationModel,
    _factorize,
    _invdiag_from_factors,
    assemble,
    evaluate,
    fit,
)
from .kernels import KernelSpec

# Cost assigned to parameter trials whose linear algebra fails; finite so a
# swarm can keep moving through bad regions of the search box.
SENTINEL_COST = 1e30

# |A^-1_kk| at or below this magnitude makes Rippa's quotient meaningless.
_BREAKDOWN_TOL = 1e-300


@dataclass(frozen=True)
class CostValue:
    """Scalar cost plus, for LOOCV, the signed per-point error vector."""

    value: float
    per_point_errors: np.ndarray | None = None


@dataclass(frozen=True)
class ObjectiveSpec:
    """Which cost to minimize and the data it needs.

    kind "rms" requires an evaluation grid with truth values; kind "loocv"
    uses only the data's own values.  augmented selects the polynomial-tail
    fit for rms and the brute-force path for loocv.
    """

    kind: str
    grid: EvaluationGrid | None = None
    truth_values: np.ndarray | None = None
    augmented: bool = False

    def __post_init__(self):
        if self.kind not in ("rms", "loocv"):
            raise ConfigError(f"objective kind must be rms or loocv, got {self.kind!r}")
        if self.kind == "rms":
            if self.grid is None or self.truth_values is None:
                raise ConfigError("rms objective requires grid and truth_values")
            truth = np.asarray(self.truth_values, dtype=float).ravel()
            if truth.shape[0] != self.grid.m:
                raise ConfigError(
                    f"got {truth.shape[0]} truth values for {self.grid.m} grid points"
                )
            object.__setattr__(self, "truth_values", truth)

    @classmethod
    def rms(cls, grid: EvaluationGrid, truth_values, augmented: bool = False):
        return cls("rms", grid=grid, truth_values=truth_values, augmented=augmented)

    @classmethod
    def loocv(cls, augmented: bool = False):
        return cls("loocv", augmented=augmented)


def rms_error(model: InterpolationModel, grid: EvaluationGrid, truth_values) -> float:
    """Root mean square error of the interpolant over the grid."""
    truth = np.asarray(truth_values, dtype=float).ravel()
    if truth.shape[0] != grid.m:
        raise DomainError(
            f"got {truth.shape[0]} truth values for {grid.m} evaluation points"
        )
    residual = evaluate(model, grid) - truth
    return float(np.sqrt(np.mean(residual**2)))


def loocv_cost_rippa(points: PointSet, kernel: KernelSpec) -> CostValue:
    """LOOCV cost from one full-data factorization (plain systems only)."""
    if points.n < 2:
        raise DomainError("loocv needs at least 2 points")
    system = assemble(points, kernel, augmented=False)
    factors, _ = _factorize(system.matrix)
    coeffs = sla.lu_solve(factors, system.rhs, check_finite=False)
    diag = _invdiag_from_factors(factors, system.size)
    if np.any(np.abs(diag) <= _BREAKDOWN_TOL):
        k = int(np.argmin(np.abs(diag)))
        raise NumericalBreakdownError(
            f"inverse diagonal entry {k} has magnitude {abs(diag[k]):.3e}"
        )
    errors = coeffs / diag
    return CostValue(float(np.linalg.norm(errors)), errors)


def loocv_cost_brute(
    points: PointSet, kernel: KernelSpec, augmented: bool = False
) -> CostValue:
    """LOOCV cost by refitting each leave-one-out subset (the oracle path)."""
    n, s = points.n, points.dim
    minimum = s + 2 if augmented else 2
    if n < minimum:
        raise DomainError(f"brute-force loocv needs at least {minimum} points, got {n}")
    errors = np.empty(n)
    for k in range(n):
        keep = np.arange(n) != k
        subset = PointSet(points.coords[keep], points.values[keep])
        try:
            reduced = fit(subset, kernel, augmented=augmented)
        except SingularSystemError as exc:
            raise SingularSystemError(
                f"leave-one-out refit failed excluding point {k}: {exc}",
                index=exc.index,
            ) from exc
        prediction = evaluate(reduced, points.coords[k : k + 1])
        errors[k] = points.values[k] - prediction[0]
    return CostValue(float(np.linalg.norm(errors)), errors)


def objective_value(spec: ObjectiveSpec, points: PointSet, kernel: KernelSpec) -> float:
    """Cost of one parameter trial; numerical failures become SENTINEL_COST.

    Configuration errors still propagate: only singular systems, numerical
    breakdowns, and non-finite costs are mapped to the sentinel, so an
    optimizer can keep sampling while misuse stays loud.
    """
    try:
        if spec.kind == "rms":
            model = fit(points, kernel, augmented=spec.augmented)
            cost = rms_error(model, spec.grid, spec.truth_values)
        elif spec.augmented:
            cost = loocv_cost_brute(points, kernel, augmented=True).value
        else:
            cost = loocv_cost_rippa(points, kernel).value
    except (SingularSystemError, NumericalBreakdownError):
        return SENTINEL_COST
    if not np.isfinite(cost):
        return SENTINEL_COST
    return cost


def kernel_objective(spec: ObjectiveSpec, points: PointSet, to_kernel=None):
    """Bind an objective to a position -> KernelSpec mapping for an optimizer.

    The default mapping reads a position as the hybrid triple
    (epsilon, alpha, beta).  Positions that fail kernel construction (for
    example both weights clamped to zero) cost SENTINEL_COST rather than
    raising, since they are optimizer trials, not user configuration.
    """
    if to_kernel is None:
        to_kernel = lambda pos: KernelSpec.hybrid(pos[0], pos[1], pos[2])

    def objective(position) -> float:
        try:
            kernel = to_kernel(np.asarray(position, dtype=float))
        except ConfigError:
            return SENTINEL_COST
        return objective_value(spec, points, kernel)

    return objective
