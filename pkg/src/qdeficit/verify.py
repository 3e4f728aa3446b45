"""
Self-verification suite: every structural property and every
closed-form / numerical-oracle equivalence, with deterministic seeds.

``run_verify`` returns one :class:`PropertyResult` per property. The
closed forms under test are looked up through a :class:`ClosedForms`
bundle so that seeded faults can be swapped in to show the suite catches
them.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import correlations as corr
from . import linalg
from .decoherence import (
    DecayRates,
    DephasingParams,
    apply_dephasing,
    dephasing_kraus,
    gamma_from_decay,
)
from .measurement import (
    MeasurementBasis,
    WeakMeasurement,
    projective_post_state,
    projectors_from_basis,
    weak_operators,
    weak_post_state,
)
from .states import (
    TwoParamState,
    build_two_param_state,
    random_classical_quantum,
    random_density_matrix,
)

SEED = 20160901
WEAK_XS = (0.1, 0.8, 2.0, 10.0)
ORDERING_XS = (0.1, 0.5, 0.8, 2.0, 5.0)
GAMMA_PAIRS = ((0.0, 0.0), (0.3, 0.3), (0.5, 0.2), (0.1, 0.8), (0.9, 0.7), (1.0, 0.4))


@dataclass(frozen=True)
class PropertyResult:
    name: str
    samples: int
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.name}: samples={self.samples} "
            f"max_dev={self.max_deviation:.3e} tol={self.tolerance:.0e}"
        )


@dataclass(frozen=True)
class ClosedForms:
    deficit: Callable = corr.deficit_closed_form
    weak_deficit: Callable = corr.weak_deficit_closed_form
    negativity: Callable = corr.negativity_closed_form
    dephased_deficit: Callable = corr.dephased_deficit_closed_form
    dephased_weak_deficit: Callable = corr.dephased_weak_deficit_closed_form
    dephased_negativity: Callable = corr.dephased_negativity_closed_form


# -- seeded faults ----------------------------------------------------------


def _fault_deficit_sign(st):
    s, t = st.s, st.t
    return float(corr.xlog2x(s) + s - (corr.xlog2x(t) + t) - corr.xlog2x(s + t))


def _fault_weak_tanh(st, x):
    s, t = st.s, st.t
    c = (s - t) * np.tanh(x)
    lam = np.array([0.5 * (s + t + c), 0.5 * (s + t - c)])
    return float(-np.sum(corr.xlog2x(lam)) + corr.xlog2x(s) + corr.xlog2x(t))


def _fault_negativity_nomax(st):
    return 2.0 * (st.r + st.t) - 1.0


def _fault_dephased_negativity_nomax(st, p):
    r, t = st.r, st.t
    return (2.0 * (2 * r + t - 1.0) + (2 * r + 4 * t - 1.0) * p.coherence_factor) / 3.0


FAULTS: dict[str, dict[str, Callable]] = {
    "deficit-sign": {"deficit": _fault_deficit_sign},
    "weak-tanh": {"weak_deficit": _fault_weak_tanh},
    "negativity-nomax": {
        "negativity": _fault_negativity_nomax,
        "dephased_negativity": _fault_dephased_negativity_nomax,
    },
}


def closed_forms(faults: Iterable[str] = ()) -> ClosedForms:
    forms = ClosedForms()
    for name in faults:
        if name not in FAULTS:
            raise KeyError(f"unknown fault {name!r}; choose from {sorted(FAULTS)}")
        forms = dataclasses.replace(forms, **FAULTS[name])
    return forms


# -- sample sets ------------------------------------------------------------


def family_grid(d: int, n: int = 15) -> list[TwoParamState]:
    """Valid (r, t) pairs from an n x n grid over [0, 1/(2d-4)] x [0, 1]."""
    out = []
    for r in np.linspace(0.0, 1.0 / (2 * d - 4), n):
        for t in np.linspace(0.0, 1.0, n):
            if 1.0 - 2 * (d - 2) * r - t >= -1e-12:
                out.append(TwoParamState(float(r), float(t), d))
    return out


def random_family_state(rng: np.random.Generator, d: int) -> TwoParamState:
    w = rng.dirichlet([1.0, 1.0, 1.0])
    # w splits unit weight between the r-sector, the three s levels and t
    return TwoParamState(w[0] / (2 * (d - 2)), w[2], d)


def _random_hermitian(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return g + g.conj().T


def _random_basis(rng) -> MeasurementBasis:
    return MeasurementBasis(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))


# -- properties -------------------------------------------------------------


def _max(values, default=0.0) -> float:
    values = list(values)
    return float(max(values)) if values else default


def prop_partial_transpose(rng) -> list[PropertyResult]:
    inv, dag = [], []
    for _ in range(100):
        m = _random_hermitian(rng, 6)
        pt = linalg.partial_transpose_b(m, 2, 3)
        inv.append(np.max(np.abs(linalg.partial_transpose_b(pt, 2, 3) - m)))
        dag.append(np.max(np.abs(linalg.partial_transpose_b(linalg.dagger(m), 2, 3) - linalg.dagger(pt))))
    return [
        PropertyResult("partial_transpose_involution", 100, _max(inv), 1e-12),
        PropertyResult("partial_transpose_commutes_with_dagger", 100, _max(dag), 1e-12),
    ]


def prop_eigen_trace(rng) -> PropertyResult:
    devs = []
    for n in (2, 3, 4, 6, 8, 10, 12):
        for _ in range(10):
            m = _random_hermitian(rng, n)
            devs.append(abs(np.sum(linalg.hermitian_eigenvalues(m)) - np.trace(m).real))
    return PropertyResult("eigenvalue_sum_equals_trace", len(devs), _max(devs), 1e-10)


def prop_trace_norm_states(rng) -> PropertyResult:
    devs = []
    for d in (2, 3, 4):
        for _ in range(20):
            devs.append(abs(linalg.trace_norm_hermitian(random_density_matrix(2, d, rng).mat) - 1.0))
    return PropertyResult("trace_norm_of_state_is_one", len(devs), _max(devs), 1e-9)


def prop_family(rng) -> list[PropertyResult]:
    spec_dev, ent_dev, n = [], [], 0
    for d in (3, 4, 5, 6):
        for st in family_grid(d, 20):
            rho = build_two_param_state(st.r, st.t, d)
            w = linalg.hermitian_eigenvalues(rho.mat)
            spec_dev.append(np.max(np.abs(w - st.spectrum())))
            closed = -(3 * corr.xlog2x(st.s) + corr.xlog2x(st.t) + 2 * (d - 2) * corr.xlog2x(st.r))
            ent_dev.append(abs(corr.von_neumann_entropy(rho) - closed))
            n += 1
    return [
        PropertyResult("family_spectrum", n, _max(spec_dev), 1e-10),
        PropertyResult("family_entropy_closed_form", n, _max(ent_dev), 1e-9),
    ]


def prop_measurement_operators(rng) -> list[PropertyResult]:
    comp, alg = [], []
    eye = np.eye(2)
    for _ in range(50):
        b = _random_basis(rng)
        w = WeakMeasurement(rng.uniform(0, 10), b)
        qp, qm = weak_operators(w)
        comp.append(np.max(np.abs(linalg.dagger(qp) @ qp + linalg.dagger(qm) @ qm - eye)))
        p0, p1 = projectors_from_basis(b)
        alg.append(max(
            np.max(np.abs(p0 @ p0 - p0)), np.max(np.abs(p1 @ p1 - p1)),
            np.max(np.abs(p0 @ p1)), np.max(np.abs(p0 + p1 - eye)),
        ))
    return [
        PropertyResult("weak_operator_completeness", 50, _max(comp), 1e-12),
        PropertyResult("projector_algebra", 50, _max(alg), 1e-12),
    ]


def prop_post_maps(rng) -> list[PropertyResult]:
    tr, pos, idem, n = [], [], [], 0
    for d in (3, 4):
        for _ in range(25):
            rho = random_density_matrix(2, d, rng)
            b = _random_basis(rng)
            proj = projective_post_state(rho, b)
            weak = weak_post_state(rho, WeakMeasurement(rng.uniform(0, 5), b))
            for post in (proj, weak):
                tr.append(abs(np.trace(post.mat).real - 1.0))
                pos.append(max(0.0, -linalg.hermitian_eigenvalues(post.mat)[0]))
            idem.append(np.max(np.abs(projective_post_state(proj, b).mat - proj.mat)))
            n += 1
    return [
        PropertyResult("post_state_trace_preservation", 2 * n, _max(tr), 1e-12),
        PropertyResult("post_state_positivity", 2 * n, _max(pos), 1e-10),
        PropertyResult("projective_idempotence", n, _max(idem), 1e-12),
    ]


def prop_post_measurement_spectrum(rng) -> PropertyResult:
    devs = []
    for _ in range(25):
        st = random_family_state(rng, int(rng.integers(3, 7)))
        rho = build_two_param_state(st.r, st.t, st.d)
        post = projective_post_state(rho, _random_basis(rng))
        s, t = st.s, st.t
        expected = np.sort([s, s, (s + t) / 2, (s + t) / 2] + [st.r] * (2 * (st.d - 2)))
        devs.append(np.max(np.abs(linalg.hermitian_eigenvalues(post.mat) - expected)))
    return PropertyResult("post_measurement_spectrum", 25, _max(devs), 1e-10)


def prop_weak_spectrum(rng) -> list[PropertyResult]:
    """Weak post-state spectra: basis independence and x-interpolation."""
    basis_dev, interp_dev, n = [], [], 0
    xs = (0.0, 0.4, 0.8, 2.0, 10.0, 40.0)
    for _ in range(10):
        st = random_family_state(rng, int(rng.integers(3, 6)))
        rho = build_two_param_state(st.r, st.t, st.d)
        b = _random_basis(rng)
        spread = []
        for x in xs:
            w_comp = linalg.hermitian_eigenvalues(weak_post_state(rho, WeakMeasurement(x)).mat)
            w_rand = linalg.hermitian_eigenvalues(weak_post_state(rho, WeakMeasurement(x, b)).mat)
            basis_dev.append(np.max(np.abs(w_comp - w_rand)))
            # gap between the two Bell-block levels shrinks from |s - t| towards 0
            spread.append(abs(st.s - st.t) / np.cosh(x))
            lam = 0.5 * (st.s + st.t + np.array([1, -1]) * (st.s - st.t) / np.cosh(x))
            expected = np.sort(np.concatenate([lam, [st.s, st.s], [st.r] * (2 * (st.d - 2))]))
            interp_dev.append(np.max(np.abs(w_comp - expected)))
            n += 1
        unmeasured = linalg.hermitian_eigenvalues(rho.mat)
        projective = linalg.hermitian_eigenvalues(projective_post_state(rho, b).mat)
        at0 = linalg.hermitian_eigenvalues(weak_post_state(rho, WeakMeasurement(0.0, b)).mat)
        at40 = linalg.hermitian_eigenvalues(weak_post_state(rho, WeakMeasurement(40.0, b)).mat)
        interp_dev.append(np.max(np.abs(at0 - unmeasured)))
        interp_dev.append(np.max(np.abs(at40 - projective)))
        interp_dev.append(_max(np.diff(spread)))
    return [
        PropertyResult("weak_spectrum_basis_independence", n, _max(basis_dev), 1e-10),
        PropertyResult("weak_spectrum_interpolation", n, _max(interp_dev), 1e-10),
    ]


def prop_channel(rng) -> list[PropertyResult]:
    compl = []
    for ga in np.linspace(0, 1, 11):
        for gb in np.linspace(0, 1, 11):
            es, fs = dephasing_kraus(DephasingParams(ga, gb))
            compl.append(np.max(np.abs(sum(linalg.dagger(e) @ e for e in es) - np.eye(2))))
            compl.append(np.max(np.abs(sum(linalg.dagger(f) @ f for f in fs) - np.eye(3))))

    pairs = [DephasingParams(a, b) for a in (0.0, 0.5, 1.0) for b in (0.0, 0.5, 1.0)]
    tr, pos, diag = [], [], []
    for _ in range(100):
        rho = random_density_matrix(2, 3, rng)
        for p in pairs:
            out = apply_dephasing(rho, p)
            tr.append(abs(np.trace(out.mat).real - 1.0))
            pos.append(max(0.0, -linalg.hermitian_eigenvalues(out.mat)[0]))
            diag.append(np.max(np.abs(np.diag(out.mat) - np.diag(rho.mat))))

    damp, nd = [], 0
    for st in family_grid(3, 8):
        rho = build_two_param_state(st.r, st.t, 3)
        off = ~np.eye(6, dtype=bool)
        for _ in range(5):
            p = DephasingParams(rng.uniform(), rng.uniform())
            out = apply_dephasing(rho, p)
            damp.append(np.max(np.abs(out.mat[off] - rho.mat[off] * p.coherence_factor)))
            nd += 1

    semi = []
    for _ in range(5):
        t1, t2, rate = rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 3)
        rho = random_density_matrix(2, 3, rng)
        two_step = apply_dephasing(
            apply_dephasing(rho, gamma_from_decay(DecayRates(t1, rate, rate))),
            gamma_from_decay(DecayRates(t2, rate, rate)),
        )
        one_step = apply_dephasing(rho, gamma_from_decay(DecayRates(t1 + t2, rate, rate)))
        semi.append(np.max(np.abs(two_step.mat - one_step.mat)))

    return [
        PropertyResult("kraus_completeness", len(compl), _max(compl), 1e-12),
        PropertyResult("channel_trace_preservation", len(tr), _max(tr), 1e-12),
        PropertyResult("channel_positivity", len(pos), _max(pos), 1e-10),
        PropertyResult("channel_fixes_diagonal", len(diag), _max(diag), 1e-12),
        PropertyResult("coherence_damping_law", nd, _max(damp), 1e-12),
        PropertyResult("dephasing_semigroup_in_tau", 5, _max(semi), 1e-10),
    ]


def prop_deficit_equivalence(forms: ClosedForms, grid_n: int) -> list[PropertyResult]:
    dev, spread, upper, n = [], [], [], 0
    for d in (3, 4, 5):
        for st in family_grid(d, 15):
            res = corr.deficit_numerical(build_two_param_state(st.r, st.t, d), grid_n=grid_n)
            dev.append(abs(forms.deficit(st) - res.value))
            spread.append(res.spread)
            upper.append(max(res.value, forms.deficit(st)) - 1.0)
            n += 1
    return [
        PropertyResult("deficit_closed_form_vs_minimization", n, _max(dev), 1e-8),
        PropertyResult("measurement_independence_spread", n, _max(spread), 1e-9),
        PropertyResult("deficit_upper_bound_one_bit", n, max(0.0, _max(upper)), 1e-9),
    ]


def prop_weak_equivalence(forms: ClosedForms) -> list[PropertyResult]:
    dev, limits, mono, n = [], [], [], 0
    for st in family_grid(3, 15):
        rho = build_two_param_state(st.r, st.t, 3)
        for x in WEAK_XS:
            dev.append(abs(forms.weak_deficit(st, x) - corr.weak_deficit(rho, x)))
            n += 1
        limits.append(abs(forms.weak_deficit(st, 0.0)))
        limits.append(abs(forms.weak_deficit(st, 40.0) - forms.deficit(st)))
        vals = [forms.weak_deficit(st, x) for x in (0.0, 0.1, 0.4, 0.8, 2.0, 5.0, 10.0, 40.0)]
        mono.append(max(0.0, _max(-np.diff(vals))))
    return [
        PropertyResult("weak_deficit_closed_form_vs_oracle", n, _max(dev), 1e-9),
        PropertyResult("weak_deficit_limits", len(limits), _max(limits), 1e-9),
        PropertyResult("weak_deficit_monotone_in_x", len(mono), _max(mono), 1e-12),
    ]


def prop_dephased_equivalence(forms: ClosedForms, grid_n: int) -> list[PropertyResult]:
    proj, weak, n_proj, n_weak = [], [], 0, 0
    states = family_grid(3, 6)
    for st in states:
        sigma = build_two_param_state(st.r, st.t, 3)
        for ga, gb in GAMMA_PAIRS[1:4]:
            p = DephasingParams(ga, gb)
            dephased = apply_dephasing(sigma, p)
            proj.append(abs(forms.dephased_deficit(st, p) - corr.deficit_numerical(dephased, grid_n=grid_n).value))
            n_proj += 1
    for st in family_grid(3, 10):
        sigma = build_two_param_state(st.r, st.t, 3)
        for ga, gb in GAMMA_PAIRS:
            p = DephasingParams(ga, gb)
            dephased = apply_dephasing(sigma, p)
            for x in (0.0, 0.8, 2.0):
                weak.append(abs(forms.dephased_weak_deficit(st, p, x) - corr.weak_deficit(dephased, x)))
                n_weak += 1
    return [
        PropertyResult("dephased_deficit_closed_form_vs_minimization", n_proj, _max(proj), 1e-9),
        PropertyResult("dephased_weak_deficit_closed_form_vs_oracle", n_weak, _max(weak), 1e-9),
    ]


def prop_ordering(forms: ClosedForms) -> PropertyResult:
    viol, n = [], 0
    for d in (3, 4, 5):
        for st in family_grid(d, 15):
            for x in ORDERING_XS:
                viol.append(forms.weak_deficit(st, x) - forms.deficit(st))
                n += 1
                if d == 3:
                    for ga, gb in GAMMA_PAIRS:
                        p = DephasingParams(ga, gb)
                        viol.append(forms.dephased_weak_deficit(st, p, x) - forms.dephased_deficit(st, p))
                        n += 1
    return PropertyResult("weak_not_above_projective", n, max(0.0, _max(viol)), 1e-12)


def prop_negativity(forms: ClosedForms, rng) -> PropertyResult:
    devs = []
    gammas = [DephasingParams(rng.uniform(), rng.uniform()) for _ in range(50)]
    for st in family_grid(3, 15):
        sigma = build_two_param_state(st.r, st.t, 3)
        devs.append(abs(forms.negativity(st) - corr.negativity(sigma)))
        devs.append(abs(forms.dephased_negativity(st, DephasingParams()) - corr.negativity(sigma)))
    for st in family_grid(3, 8):
        sigma = build_two_param_state(st.r, st.t, 3)
        for p in gammas:
            devs.append(abs(forms.dephased_negativity(st, p) - corr.negativity(apply_dephasing(sigma, p))))
    return PropertyResult("negativity_closed_form_vs_trace_norm", len(devs), _max(devs), 1e-9)


def prop_classical_quantum(rng, grid_n: int) -> PropertyResult:
    vals = [abs(corr.deficit_numerical(random_classical_quantum(3, rng), grid_n=grid_n).value) for _ in range(20)]
    return PropertyResult("classical_quantum_zero_deficit", 20, _max(vals), 1e-8)


def prop_separable_with_deficit(forms: ClosedForms) -> PropertyResult:
    st = TwoParamState.from_s_t(0.15, 0.40, 3)
    sigma = build_two_param_state(st.r, st.t, 3)
    # deviation: shortfall below 0.05 bits plus any detected entanglement
    dev = max(0.0, 0.05 - forms.deficit(st)) + forms.negativity(st) + corr.negativity(sigma)
    return PropertyResult("separable_state_has_deficit", 1, dev, 0.0)


def prop_sudden_death(forms: ClosedForms) -> PropertyResult:
    st = TwoParamState(0.03, 0.58, 3)
    sigma = build_two_param_state(st.r, st.t, 3)

    def neg(g):
        return corr.negativity(apply_dephasing(sigma, DephasingParams(g, g)))

    lo, hi = 0.0, 1.0
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if neg(mid) > 0 else (lo, mid)
    closed = corr.sudden_death_gamma(st)
    grid = np.linspace(0, 1, 101)
    closed_vals = [forms.dephased_negativity(st, DephasingParams(g, g)) for g in grid]
    # negativity must be nonincreasing in gamma and vanish past the root
    dev = abs(hi - closed) + max(0.0, _max(np.diff(closed_vals)))
    dev += sum(abs(v) for g, v in zip(grid, closed_vals) if g > closed)
    return PropertyResult("sudden_death_threshold", 1 + len(grid), dev, 1e-6)


def run_verify(faults: Iterable[str] = (), grid_n: int = 64, seed: int = SEED) -> list[PropertyResult]:
    forms = closed_forms(faults)
    rng = np.random.default_rng(seed)
    results: list[PropertyResult] = []
    results += prop_partial_transpose(rng)
    results.append(prop_eigen_trace(rng))
    results.append(prop_trace_norm_states(rng))
    results += prop_family(rng)
    results += prop_measurement_operators(rng)
    results += prop_post_maps(rng)
    results.append(prop_post_measurement_spectrum(rng))
    results += prop_weak_spectrum(rng)
    results += prop_channel(rng)
    results += prop_deficit_equivalence(forms, grid_n)
    results += prop_weak_equivalence(forms)
    results += prop_dephased_equivalence(forms, grid_n)
    results.append(prop_ordering(forms))
    results.append(prop_negativity(forms, rng))
    results.append(prop_classical_quantum(rng, grid_n))
    results.append(prop_separable_with_deficit(forms))
    results.append(prop_sudden_death(forms))
    return results


def format_report(results: list[PropertyResult]) -> str:
    lines = [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} properties passed")
    return "\n".join(lines) + "\n"
