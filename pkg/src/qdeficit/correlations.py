"""
Correlation measures for 2 (x) d states.

Two independent routes are provided for every quantity:

* numerical: build the relevant operator, diagonalize it with the Jacobi
  solver and take entropies / trace norms (for the projective deficit, a
  grid search plus Nelder-Mead over Bloch angles);
* closed form: scalar expressions in (r, s, t, x, gamma) for the
  two-parameter family.

All entropies are in bits, with 0 log 0 = 0 for weights below 1e-15.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np
from scipy.optimize import minimize

from . import linalg
from .decoherence import DephasingParams
from .errors import DimensionError, ParameterError
from .measurement import (
    COMPUTATIONAL,
    MeasurementBasis,
    WeakMeasurement,
    apply_local_kraus_a,
    projector_stack,
    weak_post_state,
)
from .states import DensityMatrix, TwoParamState

ZERO_WEIGHT = 1e-15
# Closed-form negativities below this are rounding noise in the constraint.
NEGATIVITY_FLOOR = 1e-14
GRID_TIE_TOL = 1e-12


def xlog2x(v):
    """Elementwise v log2 v with the 0 log 0 = 0 convention (v <= 1e-15 -> 0)."""
    v = np.asarray(v, dtype=float)
    safe = np.where(v > ZERO_WEIGHT, v, 1.0)
    out = np.where(v > ZERO_WEIGHT, v * np.log2(safe), 0.0)
    return out if out.ndim else float(out)


def entropy_from_eigenvalues(w) -> np.ndarray | float:
    """-sum w log2 w along the last axis."""
    return -np.sum(xlog2x(w), axis=-1)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return float(entropy_from_eigenvalues(linalg.hermitian_eigenvalues(rho.mat)))


# --------------------------------------------------------------------------
# projective deficit by direct minimization


@dataclass(frozen=True)
class DeficitResult:
    value: float
    argmin_basis: MeasurementBasis
    spread: float


def _measured_entropy(rho: np.ndarray, dim_b: int, theta, phi) -> np.ndarray:
    post = apply_local_kraus_a(rho, projector_stack(theta, phi), dim_b)
    return entropy_from_eigenvalues(linalg._eigvalsh_unchecked(linalg.symmetrize(post)))


def _normalize_angles(theta: float, phi: float) -> MeasurementBasis:
    theta = float(np.clip(theta, 0.0, np.pi))
    phi = float(np.mod(phi, 2 * np.pi))
    if phi >= 2 * np.pi:
        phi = 0.0
    return MeasurementBasis(theta, phi)


def deficit_numerical(rho: DensityMatrix, grid_n: int = 64, refine_tol: float = 1e-10) -> DeficitResult:
    """One-way deficit min_b S(rho measured in b) - S(rho) by brute force.

    A grid_n x grid_n grid over theta in [0, pi] (endpoints included) and
    phi in [0, 2 pi) locates the best cell; Nelder-Mead then refines from
    there until the simplex is smaller than ``refine_tol``. ``spread`` is
    the max - min of the objective over the grid.
    """
    if rho.dim_a != 2:
        raise DimensionError(f"deficit needs a qubit on A, got dim_a={rho.dim_a}")
    if grid_n < 8:
        raise ParameterError(f"grid_n must be >= 8, got {grid_n}")
    m, dim_b = rho.mat, rho.dim_b

    thetas = np.linspace(0.0, np.pi, grid_n)
    phis = np.linspace(0.0, 2 * np.pi, grid_n, endpoint=False)
    th, ph = np.meshgrid(thetas, phis, indexing="ij")
    obj = _measured_entropy(m, dim_b, th.ravel(), ph.ravel())
    grid_min = float(obj.min())
    spread = float(obj.max() - grid_min)
    # first index in theta-major order: smallest theta, then smallest phi
    best = int(np.flatnonzero(obj <= grid_min + GRID_TIE_TOL)[0])
    t0, p0 = float(th.ravel()[best]), float(ph.ravel()[best])

    dt = thetas[1] - thetas[0]
    dp = phis[1] - phis[0]
    simplex = np.array([[t0, p0], [t0 + (dt if t0 < np.pi else -dt), p0], [t0, p0 + dp]])

    def f(v):
        return float(_measured_entropy(m, dim_b, v[0], v[1]))

    res = minimize(
        f,
        simplex[0],
        method="Nelder-Mead",
        bounds=[(0.0, np.pi), (None, None)],
        options={"initial_simplex": simplex, "xatol": refine_tol, "fatol": 1e-14, "maxiter": 4000},
    )
    if res.fun < grid_min - GRID_TIE_TOL:
        measured, basis = float(res.fun), _normalize_angles(*res.x)
    else:
        measured, basis = min(grid_min, float(res.fun)), MeasurementBasis(t0, p0)
    return DeficitResult(measured - von_neumann_entropy(rho), basis, spread)


def weak_deficit(rho: DensityMatrix, x: float, basis: MeasurementBasis = COMPUTATIONAL) -> float:
    """S(after weak measurement of strength x) - S(rho), by diagonalization."""
    post = weak_post_state(rho, WeakMeasurement(x, basis))
    return von_neumann_entropy(post) - von_neumann_entropy(rho)


def negativity(rho: DensityMatrix) -> float:
    """max(0, ||rho^T_B||_1 - 1)."""
    pt = linalg.partial_transpose_b(rho.mat, rho.dim_a, rho.dim_b)
    return max(0.0, linalg.trace_norm_hermitian(pt) - 1.0)


# --------------------------------------------------------------------------
# closed forms for the two-parameter family


def _sech(x: float) -> float:
    return float(1.0 / np.cosh(x))


def _require_qutrit(st: TwoParamState):
    if st.d != 3:
        raise DimensionError(f"closed form holds for the qubit-qutrit family only, got d={st.d}")


def _check_x(x: float):
    if x < 0:
        raise ParameterError(f"weak strength x={x} must be >= 0")


def deficit_closed_form(st: TwoParamState) -> float:
    """s log2(2s) + t log2(2t) - (s+t) log2(s+t); the same for every d."""
    s, t = st.s, st.t
    return float(xlog2x(s) + s + xlog2x(t) + t - xlog2x(s + t)) if s + t > 0 else 0.0


def weak_deficit_closed_form(st: TwoParamState, x: float) -> float:
    """-sum_i L_i log2 L_i + s log2 s + t log2 t, L_i = (s + t +- (s - t) sech x) / 2."""
    _check_x(x)
    s, t = st.s, st.t
    c = (s - t) * _sech(x)
    lam = np.array([0.5 * (s + t + c), 0.5 * (s + t - c)])
    return float(-np.sum(xlog2x(lam)) + xlog2x(s) + xlog2x(t))


def negativity_closed_form(st: TwoParamState) -> float:
    """max(0, 2(r + t) - 1) for the qubit-qutrit family."""
    _require_qutrit(st)
    v = 2.0 * (st.r + st.t) - 1.0
    return v if v > NEGATIVITY_FLOOR else 0.0


def dephased_deficit_closed_form(st: TwoParamState, p: DephasingParams) -> float:
    """sum_j l_j log2 l_j - (s+t) log2((s+t)/2), l_j = (s + t +- (s - t) k) / 2.

    k = sqrt((1 - gamma_a)(1 - gamma_b)).
    """
    _require_qutrit(st)
    s, t = st.s, st.t
    c = (s - t) * p.coherence_factor
    lam = np.array([0.5 * (s + t + c), 0.5 * (s + t - c)])
    return float(np.sum(xlog2x(lam)) - xlog2x(0.5 * (s + t)) * 2.0)


def dephased_weak_deficit_closed_form(st: TwoParamState, p: DephasingParams, x: float) -> float:
    """sum_j (eta_j log2 eta_j - xi_j log2 xi_j).

    eta_j uses coherence (s - t) k, xi_j uses (s - t) k sech x.
    """
    _require_qutrit(st)
    _check_x(x)
    s, t = st.s, st.t
    k = p.coherence_factor
    eta = 0.5 * (s + t + np.array([1.0, -1.0]) * (s - t) * k)
    xi = 0.5 * (s + t + np.array([1.0, -1.0]) * (s - t) * _sech(x) * k)
    return float(np.sum(xlog2x(eta) - xlog2x(xi)))


def dephased_negativity_closed_form(st: TwoParamState, p: DephasingParams) -> float:
    """max(0, [2(2r + t - 1) + (2r + 4t - 1) k] / 3)."""
    _require_qutrit(st)
    r, t = st.r, st.t
    v = (2.0 * (2 * r + t - 1.0) + (2 * r + 4 * t - 1.0) * p.coherence_factor) / 3.0
    return v if v > NEGATIVITY_FLOOR else 0.0


def sudden_death_gamma(st: TwoParamState) -> float | None:
    """Smallest equal-rate gamma at which the dephased negativity reaches zero.

    With gamma_a = gamma_b = g the coherence factor is 1 - g, so the root is
    linear. Returns None when the state is separable already at g = 0.
    """
    _require_qutrit(st)
    r, t = st.r, st.t
    slope = 2 * r + 4 * t - 1.0
    if negativity_closed_form(st) == 0.0 or slope <= 0:
        return None
    return 1.0 + 2.0 * (2 * r + t - 1.0) / slope


@dataclass(frozen=True)
class CorrelationPoint:
    r: float
    s: float
    t: float
    x: float | None
    gamma_a: float | None
    gamma_b: float | None
    deficit: float
    weak_deficit: float
    negativity: float

    def as_dict(self) -> dict:
        return asdict(self)


def closed_form_point(st: TwoParamState, x: float, p: DephasingParams | None = None) -> CorrelationPoint:
    """All three measures for one family member, from the closed forms.

    Without ``p`` the undephased expressions are used; the negativity then
    needs d = 3 and comes back NaN otherwise.
    """
    if p is None:
        neg = negativity_closed_form(st) if st.d == 3 else float("nan")
        return CorrelationPoint(
            st.r, st.s, st.t, x, None, None,
            deficit_closed_form(st), weak_deficit_closed_form(st, x), neg,
        )
    return CorrelationPoint(
        st.r, st.s, st.t, x, p.gamma_a, p.gamma_b,
        dephased_deficit_closed_form(st, p),
        dephased_weak_deficit_closed_form(st, p, x),
        dephased_negativity_closed_form(st, p),
    )
