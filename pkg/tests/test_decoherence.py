import numpy as np
import pytest
from numpy.testing import assert_allclose

from qdeficit import linalg, states
from qdeficit.decoherence import (
    DecayRates,
    DephasingParams,
    apply_dephasing,
    dephasing_kraus,
    gamma_from_decay,
    qudit_kraus_experimental,
    qutrit_kraus,
)
from qdeficit.errors import DimensionError, ParameterError


class TestKraus:
    def test_no_noise(self):
        (e0, e1), _ = dephasing_kraus(DephasingParams(0.0, 0.0))
        assert_allclose(e0, np.eye(2))
        assert_allclose(e1, 0)

    def test_full_dephasing(self):
        (e0, e1), _ = dephasing_kraus(DephasingParams(1.0, 0.0))
        assert_allclose(e0, np.diag([1, 0]))
        assert_allclose(e1, np.diag([0, 1]))

    def test_qutrit_at_075(self):
        _, (f0, f1, f2) = dephasing_kraus(DephasingParams(0.0, 0.75))
        assert_allclose(f0, np.diag([1, 0.5, 0.5]), atol=1e-15)
        assert_allclose(f1, np.diag([0, np.sqrt(0.75), 0]), atol=1e-15)
        assert_allclose(f2, np.diag([0, 0, np.sqrt(0.75)]), atol=1e-15)

    def test_completeness_grid(self):
        for ga in np.linspace(0, 1, 11):
            for gb in np.linspace(0, 1, 11):
                es, fs = dephasing_kraus(DephasingParams(ga, gb))
                assert np.max(np.abs(sum(e.conj().T @ e for e in es) - np.eye(2))) < 1e-12
                assert np.max(np.abs(sum(f.conj().T @ f for f in fs) - np.eye(3))) < 1e-12

    def test_only_qutrits(self):
        with pytest.raises(DimensionError):
            dephasing_kraus(DephasingParams(0.1, 0.1), 4)

    def test_experimental_reduces_to_qutrit(self):
        for a, b in zip(qudit_kraus_experimental(0.3, 3), qutrit_kraus(0.3)):
            assert_allclose(a, b)
        ops = qudit_kraus_experimental(0.3, 5)
        assert_allclose(sum(f.conj().T @ f for f in ops), np.eye(5), atol=1e-15)

    @pytest.mark.parametrize("ga, gb", [(-0.1, 0), (0, 1.1)])
    def test_range(self, ga, gb):
        with pytest.raises(ParameterError):
            DephasingParams(ga, gb)


class TestChannel:
    def test_identity(self, rng):
        rho = states.random_density_matrix(2, 3, rng)
        assert_allclose(apply_dephasing(rho, DephasingParams()).mat, rho.mat, atol=1e-15)

    def test_diagonal_states_fixed(self, rng):
        w = rng.dirichlet(np.ones(6))
        rho = states.validate_density_matrix(np.diag(w), 2, 3)
        for ga, gb in [(0.2, 0.9), (1.0, 1.0)]:
            assert_allclose(apply_dephasing(rho, DephasingParams(ga, gb)).mat, rho.mat, atol=1e-15)

    def test_family_coherence_scaling(self):
        sigma = states.build_two_param_state(0.03, 0.58, 3)
        out = apply_dephasing(sigma, DephasingParams(0.5, 0.5))
        # |01><10| coherence (s - t)/2 = -0.23, halved by sqrt(0.5 * 0.5)
        assert sigma.mat[1, 3].real == pytest.approx(-0.23)
        assert out.mat[1, 3].real == pytest.approx(-0.115)
        lam = [0.5 * (0.7 + 0.5 * 0.46), 0.5 * (0.7 - 0.5 * 0.46)]
        assert_allclose(linalg.hermitian_eigenvalues(out.mat), sorted(lam + [0.12, 0.12, 0.03, 0.03]), atol=1e-12)

    def test_damping_law_on_family(self, rng):
        off = ~np.eye(6, dtype=bool)
        for r, t in [(0.03, 0.58), (0.1, 0.2), (0.0, 1.0), (0.4, 0.1)]:
            sigma = states.build_two_param_state(r, t, 3)
            for _ in range(5):
                p = DephasingParams(rng.uniform(), rng.uniform())
                out = apply_dephasing(sigma, p)
                assert np.max(np.abs(out.mat[off] - sigma.mat[off] * p.coherence_factor)) < 1e-12

    def test_random_states_stay_valid(self, rng):
        for _ in range(100):
            rho = states.random_density_matrix(2, 3, rng)
            p = DephasingParams(rng.uniform(), rng.uniform())
            out = apply_dephasing(rho, p)
            assert abs(np.trace(out.mat).real - 1) < 1e-12
            assert_allclose(np.diag(out.mat), np.diag(rho.mat), atol=1e-12)

    def test_rejects_other_dimensions(self, rng):
        with pytest.raises(DimensionError):
            apply_dephasing(states.random_density_matrix(2, 4, rng), DephasingParams(0.1, 0.1))
        out = apply_dephasing(states.random_density_matrix(2, 4, rng), DephasingParams(0.1, 0.1), experimental=True)
        assert abs(np.trace(out.mat).real - 1) < 1e-12


class TestDecay:
    def test_zero_time(self):
        assert gamma_from_decay(DecayRates(0.0, 2.0, 3.0)) == DephasingParams(0.0, 0.0)

    def test_zero_rate(self):
        assert gamma_from_decay(DecayRates(7.0, 0.0, 0.0)) == DephasingParams(0.0, 0.0)

    def test_half_life(self):
        p = gamma_from_decay(DecayRates(1.0, np.log(2), np.log(2)))
        assert p.gamma_a == pytest.approx(0.5)
        assert p.gamma_b == pytest.approx(0.5)

    def test_monotone_in_time(self):
        gs = [gamma_from_decay(DecayRates(tau, 0.7, 0.2)).gamma_a for tau in np.linspace(0, 10, 50)]
        assert all(a <= b for a, b in zip(gs, gs[1:]))

    def test_semigroup(self, rng):
        for _ in range(5):
            t1, t2, rate = rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 3)
            rho = states.random_density_matrix(2, 3, rng)
            two = apply_dephasing(
                apply_dephasing(rho, gamma_from_decay(DecayRates(t1, rate, rate))),
                gamma_from_decay(DecayRates(t2, rate, rate)),
            )
            one = apply_dephasing(rho, gamma_from_decay(DecayRates(t1 + t2, rate, rate)))
            assert np.max(np.abs(two.mat - one.mat)) < 1e-10

    def test_negative_inputs(self):
        with pytest.raises(ParameterError):
            DecayRates(-1.0, 1.0, 1.0)
