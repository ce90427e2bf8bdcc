"""Dense interpolation systems: assembly, solving, evaluation, spectra.

The plain system is A c = y with A[j, k] = phi(||x_j - x_k||).  The
augmented system appends a linear polynomial tail [1, x_1, ..., x_s] and its
side conditions, giving the symmetric saddle-point block form

    [ A   P ] [ c ]   [ y ]
    [ P^T 0 ] [ d ] = [ 0 ]

which guarantees nonsingularity for conditionally positive definite kernels
on unisolvent nodes and makes the interpolant reproduce linear data exactly.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import (
    ConfigError,
    DegenerateInputError,
    DomainError,
    EigensolverError,
    SingularSystemError,
)
from .geometry import (
    PointSet,
    _as_coords,
    min_separation,
    pairwise_distances,
    points_to_csv_text,
    read_points_table,
)
from .kernels import KernelSpec, eval_kernel_batch

# A factorization whose smallest |U_kk| falls below this fraction of the
# largest is treated as numerically singular.
PIVOT_RTOL = 1e-14

# Evaluation and inverse-diagonal work is chunked to bound peak memory.
_CHUNK_CELLS = 4_000_000
_INVDIAG_BLOCK = 256

_UNISOLVENCY_HINT = (
    "augmented system is singular; if the kernel block is positive definite "
    "this usually means the nodes all lie on one hyperplane (not unisolvent "
    "for linear polynomials)"
)


@dataclass(frozen=True)
class AssembledSystem:
    """Symmetric interpolation matrix plus right-hand side.

    n_poly is 0 for the plain system and s + 1 for the augmented one; the
    matrix is (n_centers + n_poly) square.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    n_centers: int
    n_poly: int

    @property
    def augmented(self) -> bool:
        return self.n_poly > 0

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class InterpolationModel:
    """Fitted interpolant: centers, kernel, and solved coefficients.

    poly_coeffs, present iff the fit was augmented, is ordered as
    (constant, one coefficient per coordinate).
    """

    centers: PointSet
    kernel: KernelSpec
    coeffs: np.ndarray
    poly_coeffs: np.ndarray | None = None
    condition_estimate: float = float("nan")

    @property
    def augmented(self) -> bool:
        return self.poly_coeffs is not None


@dataclass(frozen=True)
class SpectralReport:
    """Full symmetric eigenvalue spectrum with conditioning summary.

    condition_number is max|lambda| / min|lambda|; negative_count counts
    eigenvalues below -1e-12 * max|lambda| so that solver-level noise around
    zero is not reported as indefiniteness.
    """

    eigenvalues: np.ndarray
    condition_number: float
    negative_count: int


def _poly_block(coords: np.ndarray) -> np.ndarray:
    n = coords.shape[0]
    return np.hstack([np.ones((n, 1)), coords])


def assemble(points: PointSet, kernel: KernelSpec, augmented: bool = False) -> AssembledSystem:
    """Build the (plain or augmented) interpolation system for given data."""
    if points.values is None:
        raise ConfigError("assemble needs points with values")
    n, s = points.n, points.dim
    if n >= 2 and min_separation(points) == 0.0:
        raise DegenerateInputError("duplicate points: minimum pairwise distance is 0")
    a = eval_kernel_batch(kernel, pairwise_distances(points, points))
    if not augmented:
        return AssembledSystem(a, points.values.copy(), n_centers=n, n_poly=0)
    if n < s + 1:
        raise ConfigError(f"augmented fit needs at least {s + 1} points, got {n}")
    p = _poly_block(points.coords)
    matrix = np.block([[a, p], [p.T, np.zeros((s + 1, s + 1))]])
    rhs = np.concatenate([points.values, np.zeros(s + 1)])
    return AssembledSystem(matrix, rhs, n_centers=n, n_poly=s + 1)


def _factorize(matrix: np.ndarray):
    """LU-factor with partial pivoting; returns ((lu, piv), condition estimate).

    Raises SingularSystemError, carrying the failing pivot index, when the
    smallest |U_kk| drops below PIVOT_RTOL times the largest.
    """
    anorm = np.linalg.norm(matrix, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(matrix, check_finite=False)
    absdiag = np.abs(np.diag(lu))
    max_pivot = float(absdiag.max()) if absdiag.size else 0.0
    if max_pivot == 0.0 or absdiag.min() <= PIVOT_RTOL * max_pivot:
        index = int(np.argmin(absdiag))
        raise SingularSystemError(
            f"numerically singular system: pivot {index} has magnitude "
            f"{absdiag[index]:.3e} <= {PIVOT_RTOL:g} * {max_pivot:.3e}",
            index=index,
        )
    gecon = sla.get_lapack_funcs("gecon", (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0:
        raise SingularSystemError(f"condition estimation failed (info={info})")
    cond = float("inf") if rcond == 0.0 else 1.0 / float(rcond)
    return (lu, piv), cond


def fit(points: PointSet, kernel: KernelSpec, augmented: bool = False) -> InterpolationModel:
    """Solve the interpolation system and return the fitted model."""
    system = assemble(points, kernel, augmented)
    try:
        factors, cond = _factorize(system.matrix)
    except SingularSystemError as exc:
        if augmented:
            raise SingularSystemError(
                f"{exc} ({_UNISOLVENCY_HINT})", index=exc.index
            ) from exc
        raise
    solution = sla.lu_solve(factors, system.rhs, check_finite=False)
    n = system.n_centers
    poly = solution[n:] if augmented else None
    return InterpolationModel(
        centers=points,
        kernel=kernel,
        coeffs=solution[:n],
        poly_coeffs=poly,
        condition_estimate=cond,
    )


def evaluate(model: InterpolationModel, grid) -> np.ndarray:
    """Evaluate the interpolant at each grid point (chunked, order preserved)."""
    targets = _as_coords(grid)
    if targets.shape[1] != model.centers.dim:
        raise DomainError(
            f"dimension mismatch: model has {model.centers.dim} coordinates, "
            f"grid has {targets.shape[1]}"
        )
    m = targets.shape[0]
    out = np.empty(m)
    step = max(1, _CHUNK_CELLS // max(1, model.centers.n))
    for start in range(0, m, step):
        block = targets[start : start + step]
        k = eval_kernel_batch(model.kernel, pairwise_distances(block, model.centers))
        out[start : start + step] = k @ model.coeffs
    if model.augmented:
        out += _poly_block(targets) @ model.poly_coeffs
    return out


def spectral_report(system: AssembledSystem) -> SpectralReport:
    """Full eigenvalue spectrum of the symmetric system matrix."""
    matrix = system.matrix
    if not np.array_equal(matrix, matrix.T):
        raise DomainError("spectral_report requires an exactly symmetric matrix")
    try:
        eigenvalues = np.linalg.eigvalsh(matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"symmetric eigensolver did not converge: {exc}") from exc
    absev = np.abs(eigenvalues)
    amax, amin = float(absev.max()), float(absev.min())
    cond = float("inf") if amin == 0.0 else amax / amin
    negative_count = int(np.sum(eigenvalues < -1e-12 * amax))
    return SpectralReport(eigenvalues, cond, negative_count)


def _invdiag_from_factors(factors, n: int) -> np.ndarray:
    """Diagonal of the inverse by solving identity columns in blocks."""
    diag = np.empty(n)
    for start in range(0, n, _INVDIAG_BLOCK):
        stop = min(start + _INVDIAG_BLOCK, n)
        width = stop - start
        unit = np.zeros((n, width))
        unit[np.arange(start, stop), np.arange(width)] = 1.0
        x = sla.lu_solve(factors, unit, check_finite=False)
        diag[start:stop] = x[np.arange(start, stop), np.arange(width)]
    return diag


def inverse_diagonal(system: AssembledSystem) -> np.ndarray:
    """Diagonal of A**-1 for a plain system, from a single factorization.

    Solves against identity columns in blocks; only the working columns are
    ever materialized.
    """
    if system.augmented:
        raise ConfigError("inverse_diagonal is defined for plain systems only")
    factors, _ = _factorize(system.matrix)
    return _invdiag_from_factors(factors, system.size)


# --- model serialization -------------------------------------------------

_MODEL_MAGIC = "hybridrbf-model v1"


def model_to_text(model: InterpolationModel) -> str:
    """Serialize a fitted model; floats round-trip bit-exactly."""
    lines = [
        _MODEL_MAGIC,
        f"kernel: {model.kernel.to_record()}",
        f"augmented: {'true' if model.augmented else 'false'}",
        f"condition_estimate: {float(model.condition_estimate)!r}",
        "centers:",
        points_to_csv_text(model.centers).rstrip("\n"),
        "end-centers",
        "coeffs:",
    ]
    lines.extend(repr(float(c)) for c in model.coeffs)
    lines.append("end-coeffs")
    if model.augmented:
        lines.append("poly-coeffs:")
        lines.extend(repr(float(d)) for d in model.poly_coeffs)
        lines.append("end-poly-coeffs")
    return "\n".join(lines) + "\n"


def _parse_float(text: str, section: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"bad numeric line in model {section} section: {text!r}") from None


def model_from_text(text: str) -> InterpolationModel:
    lines = text.splitlines()
    if not lines or lines[0].strip() != _MODEL_MAGIC:
        raise ConfigError(f"not a model file (missing {_MODEL_MAGIC!r} header)")
    fields: dict[str, str] = {}
    centers_csv: list[str] = []
    coeffs: list[float] = []
    poly: list[float] = []
    section = None
    for line in lines[1:]:
        stripped = line.strip()
        if stripped in ("centers:", "coeffs:", "poly-coeffs:"):
            section = stripped[:-1]
            continue
        if stripped in ("end-centers", "end-coeffs", "end-poly-coeffs"):
            section = None
            continue
        if section == "centers":
            centers_csv.append(line)
        elif section == "coeffs":
            coeffs.append(_parse_float(stripped, "coeffs"))
        elif section == "poly-coeffs":
            poly.append(_parse_float(stripped, "poly-coeffs"))
        elif stripped:
            key, _, value = stripped.partition(":")
            fields[key.strip()] = value.strip()
    try:
        kernel = KernelSpec.from_record(fields["kernel"])
        augmented = fields["augmented"] == "true"
        cond = _parse_float(fields["condition_estimate"], "header")
    except KeyError as exc:
        raise ConfigError(f"model file missing field {exc}") from exc
    coords, values = read_points_table(io.StringIO("\n".join(centers_csv) + "\n"))
    if coords.shape[0] == 0:
        raise ConfigError("model file has no centers")
    centers = PointSet(coords, values)
    if len(coeffs) != centers.n:
        raise ConfigError(
            f"model file has {len(coeffs)} coefficients for {centers.n} centers"
        )
    if augmented and len(poly) != centers.dim + 1:
        raise ConfigError(
            f"model file has {len(poly)} polynomial coefficients, "
            f"expected {centers.dim + 1}"
        )
    return InterpolationModel(
        centers=centers,
        kernel=kernel,
        coeffs=np.array(coeffs),
        poly_coeffs=np.array(poly) if augmented else None,
        condition_estimate=cond,
    )


def save_model(model: InterpolationModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model_to_text(model))


def load_model(path) -> InterpolationModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_text(fh.read())
