"""Density matrices and the two-parameter 2 (x) d state family."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import (
    DimensionError,
    NotHermitianError,
    NotPositiveError,
    ParameterError,
    TraceNotOneError,
)

TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
# Slack allowed when s is derived from (r, t) and lands just below zero.
CONSTRAINT_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated bipartite density matrix on C^dim_a (x) C^dim_b.

    Instances should come from :func:`validate_density_matrix`; the matrix
    is stored read-only.
    """

    mat: np.ndarray = field(repr=False)
    dim_a: int
    dim_b: int

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b


def validate_density_matrix(m, dim_a: int, dim_b: int) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity; return a DensityMatrix.

    The stored matrix is the Hermitian part of ``m``.
    """
    a = linalg.as_matrix(m)
    if dim_a < 1 or dim_b < 1 or a.shape[0] != dim_a * dim_b:
        raise DimensionError(
            f"matrix of size {a.shape[0]} does not factor as {dim_a} x {dim_b}"
        )
    defect = linalg.hermiticity_defect(a)
    if defect > linalg.HERMITIAN_TOL:
        raise NotHermitianError("density matrix is not Hermitian", defect)
    a = linalg.symmetrize(a)
    trace_err = abs(np.trace(a).real - 1.0)
    if trace_err > TRACE_TOL:
        raise TraceNotOneError("density matrix trace differs from 1", trace_err)
    lowest = linalg.hermitian_eigenvalues(a)[0]
    if lowest < -POSITIVITY_TOL:
        raise NotPositiveError("density matrix has a negative eigenvalue", -lowest)
    a.setflags(write=False)
    return DensityMatrix(a, dim_a, dim_b)


@dataclass(frozen=True)
class TwoParamState:
    """Parameters (r, t, d) of the family; s follows from 2(d-2)r + 3s + t = 1."""

    r: float
    t: float
    d: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 3:
            raise ParameterError(f"family requires integer d >= 3, got d={self.d}")
        r_max = 1.0 / (2 * self.d - 4)
        if not (0.0 <= self.r <= r_max):
            raise ParameterError(f"r={self.r} outside [0, {r_max}] for d={self.d}")
        if not (0.0 <= self.t <= 1.0):
            raise ParameterError(f"t={self.t} outside [0, 1]")
        if self._raw_s() < -CONSTRAINT_SLACK:
            raise ParameterError(
                f"s = (1 - 2(d-2)r - t)/3 = {self._raw_s():.6g} < 0 "
                f"for r={self.r}, t={self.t}, d={self.d}"
            )

    def _raw_s(self) -> float:
        return (1.0 - 2 * (self.d - 2) * self.r - self.t) / 3.0

    @property
    def s(self) -> float:
        return max(self._raw_s(), 0.0)

    @classmethod
    def from_s_t(cls, s: float, t: float, d: int = 3) -> "TwoParamState":
        """Family member with given s and t; r is solved from the constraint."""
        r = (1.0 - 3.0 * s - t) / (2 * (d - 2))
        if -CONSTRAINT_SLACK < r < 0.0:
            r = 0.0
        if r < 0.0:
            raise ParameterError(
                f"r = (1 - 3s - t)/(2(d-2)) = {r:.6g} < 0 for s={s}, t={t}, d={d}"
            )
        return cls(r, t, d)

    def spectrum(self) -> np.ndarray:
        """Eigenvalues {r x 2(d-2), s x 3, t}, ascending."""
        vals = [self.r] * (2 * (self.d - 2)) + [self.s] * 3 + [self.t]
        return np.sort(np.array(vals))


class BellLabel(enum.Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


def bell_vector(which: BellLabel, d: int = 2) -> np.ndarray:
    """Bell vector embedded in C^2 (x) C^d (uses only B levels 0 and 1)."""
    if d < 2:
        raise DimensionError(f"Bell states need d >= 2, got {d}")
    which = BellLabel(which)
    v = np.zeros(2 * d, dtype=np.complex128)
    h = 1.0 / np.sqrt(2.0)
    if which in (BellLabel.PHI_PLUS, BellLabel.PHI_MINUS):
        sign = 1.0 if which is BellLabel.PHI_PLUS else -1.0
        v[0 * d + 0], v[1 * d + 1] = h, sign * h
    else:
        sign = 1.0 if which is BellLabel.PSI_PLUS else -1.0
        v[0 * d + 1], v[1 * d + 0] = h, sign * h
    return v


def bell_projector(which: BellLabel, d: int = 2) -> np.ndarray:
    v = bell_vector(which, d)
    return np.outer(v, v.conj())


def two_param_matrix(st: TwoParamState) -> np.ndarray:
    """Raw matrix of the family member, without validation."""
    d = st.d
    m = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    for i in range(2):
        for j in range(2, d):
            m[i * d + j, i * d + j] = st.r
    for label in (BellLabel.PHI_PLUS, BellLabel.PHI_MINUS, BellLabel.PSI_PLUS):
        m += st.s * bell_projector(label, d)
    m += st.t * bell_projector(BellLabel.PSI_MINUS, d)
    return m


def build_two_param_state(r: float, t: float, d: int = 3) -> DensityMatrix:
    """Validated density matrix of the family member (r, t) in 2 (x) d."""
    return validate_density_matrix(two_param_matrix(TwoParamState(r, t, d)), 2, d)


def maximally_mixed(dim_a: int, dim_b: int) -> DensityMatrix:
    n = dim_a * dim_b
    return validate_density_matrix(np.eye(n) / n, dim_a, dim_b)


def random_density_matrix(dim_a: int, dim_b: int, rng: np.random.Generator) -> DensityMatrix:
    """Ginibre-distributed full-rank mixed state."""
    n = dim_a * dim_b
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = g @ g.conj().T
    return validate_density_matrix(m / np.trace(m).real, dim_a, dim_b)


def random_classical_quantum(dim_b: int, rng: np.random.Generator) -> DensityMatrix:
    """Random sum_k p_k |k><k| (x) rho_k with |k> the computational basis of a qubit."""
    p = rng.dirichlet([1.0, 1.0])
    m = np.zeros((2 * dim_b, 2 * dim_b), dtype=np.complex128)
    for k in range(2):
        proj = np.zeros((2, 2))
        proj[k, k] = 1.0
        m += p[k] * np.kron(proj, random_density_matrix(1, dim_b, rng).mat)
    return validate_density_matrix(m, 2, dim_b)
