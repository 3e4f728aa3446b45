"""Local dephasing channels on a qubit-qutrit pair."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionError, ParameterError
from .states import DensityMatrix, validate_density_matrix


@dataclass(frozen=True)
class DephasingParams:
    """Dephasing probabilities on A (qubit) and B (qutrit)."""

    gamma_a: float = 0.0
    gamma_b: float = 0.0

    def __post_init__(self):
        for name in ("gamma_a", "gamma_b"):
            g = getattr(self, name)
            if not 0.0 <= g <= 1.0:
                raise ParameterError(f"{name}={g} outside [0, 1]")

    @property
    def coherence_factor(self) -> float:
        """sqrt((1 - gamma_a)(1 - gamma_b)): damping of the |01><10| coherence."""
        return float(np.sqrt((1.0 - self.gamma_a) * (1.0 - self.gamma_b)))


@dataclass(frozen=True)
class DecayRates:
    tau: float
    rate_a: float
    rate_b: float

    def __post_init__(self):
        if min(self.tau, self.rate_a, self.rate_b) < 0:
            raise ParameterError("tau and decay rates must be nonnegative")


def gamma_from_decay(rates: DecayRates) -> DephasingParams:
    """gamma = 1 - exp(-tau * Gamma) for each side."""
    return DephasingParams(
        float(-np.expm1(-rates.tau * rates.rate_a)),
        float(-np.expm1(-rates.tau * rates.rate_b)),
    )


def qubit_kraus(gamma: float) -> list[np.ndarray]:
    """E_0 = diag(1, sqrt(1-g)), E_1 = diag(0, sqrt(g))."""
    return [
        np.diag([1.0, np.sqrt(1.0 - gamma)]).astype(np.complex128),
        np.diag([0.0, np.sqrt(gamma)]).astype(np.complex128),
    ]


def qutrit_kraus(gamma: float) -> list[np.ndarray]:
    """F_0 = diag(1, sqrt(1-g), sqrt(1-g)), F_1 and F_2 keep levels 1 and 2 with sqrt(g)."""
    a, b = np.sqrt(1.0 - gamma), np.sqrt(gamma)
    return [
        np.diag([1.0, a, a]).astype(np.complex128),
        np.diag([0.0, b, 0.0]).astype(np.complex128),
        np.diag([0.0, 0.0, b]).astype(np.complex128),
    ]


def qudit_kraus_experimental(gamma: float, d: int) -> list[np.ndarray]:
    """Extension of the qutrit operators to d levels. EXPERIMENTAL.

    F_0 = diag(1, sqrt(1-g), ..., sqrt(1-g)) and F_k = sqrt(g)|k><k| for
    k = 1..d-1. Reduces to :func:`qutrit_kraus` at d = 3; nothing outside
    this function relies on it.
    """
    if d < 2:
        raise DimensionError(f"need d >= 2, got {d}")
    ops = [np.diag([1.0] + [np.sqrt(1.0 - gamma)] * (d - 1)).astype(np.complex128)]
    for k in range(1, d):
        f = np.zeros((d, d), dtype=np.complex128)
        f[k, k] = np.sqrt(gamma)
        ops.append(f)
    return ops


def dephasing_kraus(p: DephasingParams, d: int = 3) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Qubit operators (E_0, E_1) and qutrit operators (F_0, F_1, F_2)."""
    if d != 3:
        raise DimensionError(
            f"dephasing is defined for qubit-qutrit pairs (d=3), got d={d}; "
            "see qudit_kraus_experimental"
        )
    return qubit_kraus(p.gamma_a), qutrit_kraus(p.gamma_b)


def joint_kraus(p: DephasingParams, d: int = 3, *, experimental: bool = False) -> list[np.ndarray]:
    """All products E_i (x) F_j."""
    if experimental:
        es, fs = qubit_kraus(p.gamma_a), qudit_kraus_experimental(p.gamma_b, d)
    else:
        es, fs = dephasing_kraus(p, d)
    return [linalg.tensor_product(e, f) for e in es for f in fs]


def apply_kraus(m: np.ndarray, ops: list[np.ndarray]) -> np.ndarray:
    out = np.zeros_like(m, dtype=np.complex128)
    for k in ops:
        out += k @ m @ linalg.dagger(k)
    return out


def apply_dephasing(rho: DensityMatrix, p: DephasingParams, *, experimental: bool = False) -> DensityMatrix:
    """sum_ij (E_i (x) F_j) rho (E_i (x) F_j)^dagger, validated.

    Only 2 (x) 3 states are accepted unless ``experimental`` is set.
    """
    if rho.dim_a != 2:
        raise DimensionError(f"dephasing expects a qubit on A, got dim_a={rho.dim_a}")
    out = apply_kraus(rho.mat, joint_kraus(p, rho.dim_b, experimental=experimental))
    return validate_density_matrix(linalg.symmetrize(out), 2, rho.dim_b)
