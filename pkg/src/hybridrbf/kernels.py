"""Radial kernels, including the hybrid Gaussian-cubic kernel.

A radial kernel is a univariate function phi applied to the Euclidean
distance r >= 0 between an evaluation point and a center.  The hybrid kernel

    phi(r) = alpha * exp(-(epsilon * r)**2) + beta * r**3

blends the infinitely smooth Gaussian with the shape-parameter-free cubic:
a small cubic admixture tames the ill-conditioning of flat Gaussians while
the Gaussian part keeps the fast convergence on smooth data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

KERNEL_KINDS = (
    "gaussian",
    "cubic",
    "hybrid",
    "multiquadric",
    "inverse-multiquadric",
    "thin-plate-spline",
    "wendland",
)

# Kinds whose formula never reads epsilon.
SHAPE_FREE_KINDS = ("cubic", "thin-plate-spline")


@dataclass(frozen=True)
class HybridParams:
    """Kernel parameter triple (epsilon, alpha, beta).

    epsilon is the inverse-length shape parameter and must be >= 0; alpha
    and beta weight the Gaussian and cubic parts and live in [0, 1].  The
    pair alpha = beta = 0 would give the zero kernel and is rejected.
    """

    epsilon: float
    alpha: float = 1.0
    beta: float = 0.0

    def __post_init__(self):
        eps, alpha, beta = float(self.epsilon), float(self.alpha), float(self.beta)
        if not np.isfinite(eps) or eps < 0.0:
            raise ConfigError(f"epsilon must be finite and >= 0, got {self.epsilon}")
        if not 0.0 <= alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not 0.0 <= beta <= 1.0:
            raise ConfigError(f"beta must lie in [0, 1], got {self.beta}")
        if alpha == 0.0 and beta == 0.0:
            raise ConfigError("alpha and beta cannot both be zero (zero kernel)")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def normalized(cls, epsilon: float, beta: float) -> "HybridParams":
        """Two-parameter convenience form with alpha tied to 1 - beta."""
        return cls(epsilon=epsilon, alpha=1.0 - float(beta), beta=beta)


@dataclass(frozen=True)
class KernelSpec:
    """A kernel kind plus its parameters.

    cubic and thin-plate-spline ignore epsilon; alpha and beta are read only
    by the hybrid kind.  gaussian(eps) evaluates identically to
    hybrid(eps, alpha=1, beta=0).
    """

    kind: str
    params: HybridParams

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ConfigError(
                f"unknown kernel kind {self.kind!r}; expected one of {KERNEL_KINDS}"
            )

    @classmethod
    def gaussian(cls, epsilon: float) -> "KernelSpec":
        return cls("gaussian", HybridParams(epsilon, 1.0, 0.0))

    @classmethod
    def cubic(cls) -> "KernelSpec":
        return cls("cubic", HybridParams(0.0, 0.0, 1.0))

    @classmethod
    def hybrid(cls, epsilon: float, alpha: float, beta: float) -> "KernelSpec":
        return cls("hybrid", HybridParams(epsilon, alpha, beta))

    @classmethod
    def normalized_hybrid(cls, epsilon: float, beta: float) -> "KernelSpec":
        return cls("hybrid", HybridParams.normalized(epsilon, beta))

    def to_record(self) -> str:
        """Serialize as ``kind,epsilon,alpha,beta`` with round-trip floats."""
        p = self.params
        return f"{self.kind},{p.epsilon!r},{p.alpha!r},{p.beta!r}"

    @classmethod
    def from_record(cls, record: str) -> "KernelSpec":
        parts = [s.strip() for s in record.strip().split(",")]
        if len(parts) != 4:
            raise ConfigError(
                f"kernel record must have 4 comma-separated fields, got {record!r}"
            )
        kind = parts[0].lower()
        try:
            eps, alpha, beta = (float(s) for s in parts[1:])
        except ValueError as exc:
            raise ConfigError(f"bad numeric field in kernel record {record!r}") from exc
        return cls(kind, HybridParams(eps, alpha, beta))


def _phi(kind: str, params: HybridParams, r: np.ndarray) -> np.ndarray:
    eps, alpha, beta = params.epsilon, params.alpha, params.beta
    if kind == "gaussian":
        return np.exp(-((eps * r) ** 2))
    if kind == "cubic":
        return r**3
    if kind == "hybrid":
        return alpha * np.exp(-((eps * r) ** 2)) + beta * r**3
    if kind == "multiquadric":
        return np.sqrt(1.0 + (eps * r) ** 2)
    if kind == "inverse-multiquadric":
        return 1.0 / np.sqrt(1.0 + (eps * r) ** 2)
    if kind == "thin-plate-spline":
        # r**2 * log(r), with the limit value 0 at r = 0
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(r > 0.0, r * r * np.log(r), 0.0)
    if kind == "wendland":
        cut = np.maximum(1.0 - eps * r, 0.0)
        return cut**4 * (4.0 * eps * r + 1.0)
    raise ConfigError(f"unknown kernel kind {kind!r}")


def eval_kernel(spec: KernelSpec, r: float) -> float:
    """Evaluate phi(r) at a single nonnegative radius."""
    rv = np.asarray(r, dtype=float)
    if rv.ndim != 0:
        raise DomainError("eval_kernel expects a scalar radius; use eval_kernel_batch")
    if not np.isfinite(rv) or rv < 0.0:
        raise DomainError(f"radius must be finite and >= 0, got {r}")
    return float(_phi(spec.kind, spec.params, rv))


def eval_kernel_batch(spec: KernelSpec, distances) -> np.ndarray:
    """Evaluate phi elementwise on a matrix of nonnegative distances.

    Applies the same vectorized expressions as :func:`eval_kernel`, so batch
    entries match the scalar path bit for bit.
    """
    d = np.asarray(distances, dtype=float)
    if d.size:
        if not np.all(np.isfinite(d)):
            raise DomainError("all distances must be finite")
        if np.any(d < 0.0):
            raise DomainError("all distances must be >= 0")
    return _phi(spec.kind, spec.params, d)
