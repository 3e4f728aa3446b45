"""Projective and weak measurements on the qubit factor of a 2 (x) d state."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from . import linalg
from .errors import DimensionError, ParameterError
from .states import DensityMatrix, validate_density_matrix

X_MAX = 500.0


@dataclass(frozen=True)
class MeasurementBasis:
    """Qubit basis given by Bloch angles theta in [0, pi], phi in [0, 2 pi)."""

    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ParameterError(f"theta={self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < 2 * np.pi:
            raise ParameterError(f"phi={self.phi} outside [0, 2 pi)")


COMPUTATIONAL = MeasurementBasis(0.0, 0.0)


def basis_vectors(theta, phi):
    """|0'> and |1'> for (arrays of) unchecked angles; trailing axis of length 2.

    |0'> = cos(theta/2)|0> - e^{-i phi} sin(theta/2)|1>
    |1'> = e^{i phi} sin(theta/2)|0> + cos(theta/2)|1>
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    v0 = np.stack([c + 0j, -np.exp(-1j * phi) * s], axis=-1)
    v1 = np.stack([np.exp(1j * phi) * s, c + 0j], axis=-1)
    return v0, v1


def _outer(v: np.ndarray) -> np.ndarray:
    return v[..., :, None] * v[..., None, :].conj()


def projectors_from_basis(b: MeasurementBasis) -> tuple[np.ndarray, np.ndarray]:
    v0, v1 = basis_vectors(b.theta, b.phi)
    return _outer(v0), _outer(v1)


def projector_stack(theta, phi) -> np.ndarray:
    """Projector pairs for arrays of angles, shape (..., 2, 2, 2) with outcome axis -3."""
    v0, v1 = basis_vectors(theta, phi)
    return np.stack([_outer(v0), _outer(v1)], axis=-3)


def apply_local_kraus_a(rho: np.ndarray, ops: np.ndarray, dim_b: int) -> np.ndarray:
    """sum_k (K_k (x) I) rho (K_k (x) I)^dagger for qubit operators ``ops``.

    ``ops`` has shape (..., K, 2, 2); leading axes broadcast into a stack of
    output states of shape (..., 2 dim_b, 2 dim_b).
    """
    n = 2 * dim_b
    full = np.einsum("...ab,jl->...ajbl", ops, np.eye(dim_b)).reshape(ops.shape[:-2] + (n, n))
    return np.sum(full @ rho @ linalg.dagger(full), axis=-3)


def _require_qubit_a(rho: DensityMatrix):
    if rho.dim_a != 2:
        raise DimensionError(f"measurement acts on a qubit factor, got dim_a={rho.dim_a}")


def projective_post_state(rho: DensityMatrix, b: MeasurementBasis) -> DensityMatrix:
    """State after measuring A in basis ``b`` without reading the outcome."""
    _require_qubit_a(rho)
    eye = np.eye(rho.dim_b)
    post = np.zeros_like(rho.mat)
    for p in projectors_from_basis(b):
        k = linalg.tensor_product(p, eye)
        post += linalg.matmul(linalg.matmul(k, rho.mat), k)
    return validate_density_matrix(post, 2, rho.dim_b)


@dataclass(frozen=True)
class WeakMeasurement:
    """Two-outcome weak measurement of strength x built on ``basis``."""

    x: float
    basis: MeasurementBasis = field(default=COMPUTATIONAL)

    def __post_init__(self):
        if not 0.0 <= self.x <= X_MAX:
            raise ParameterError(f"weak strength x={self.x} outside [0, {X_MAX}]")


def weak_coefficients(x: float) -> tuple[float, float]:
    """sqrt((1 - tanh x)/2) and sqrt((1 + tanh x)/2)."""
    # (1 -+ tanh x)/2 == expit(-+2x), which stays accurate for large x
    return float(np.sqrt(expit(-2.0 * x))), float(np.sqrt(expit(2.0 * x)))


def weak_operators(w: WeakMeasurement) -> tuple[np.ndarray, np.ndarray]:
    """Return q(+x), q(-x)."""
    m0, m1 = projectors_from_basis(w.basis)
    lo, hi = weak_coefficients(w.x)
    return lo * m0 + hi * m1, hi * m0 + lo * m1


def weak_post_state(rho: DensityMatrix, w: WeakMeasurement) -> DensityMatrix:
    _require_qubit_a(rho)
    eye = np.eye(rho.dim_b)
    post = np.zeros_like(rho.mat)
    for q in weak_operators(w):
        k = linalg.tensor_product(q, eye)
        post += k @ rho.mat @ linalg.dagger(k)
    return validate_density_matrix(post, 2, rho.dim_b)
