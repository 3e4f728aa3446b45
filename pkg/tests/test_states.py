import numpy as np
import pytest
from numpy.testing import assert_allclose

from qdeficit import linalg, states
from qdeficit.correlations import von_neumann_entropy, xlog2x
from qdeficit.errors import NotHermitianError, NotPositiveError, ParameterError, TraceNotOneError
from qdeficit.states import BellLabel, TwoParamState


def test_running_example():
    rho = states.build_two_param_state(0.05, 0.45, 3)
    assert TwoParamState(0.05, 0.45, 3).s == pytest.approx(0.15)
    assert_allclose(linalg.hermitian_eigenvalues(rho.mat), [0.05, 0.05, 0.15, 0.15, 0.15, 0.45], atol=1e-14)


def test_t_one_is_singlet():
    rho = states.build_two_param_state(0.0, 1.0, 3)
    assert_allclose(rho.mat, states.bell_projector(BellLabel.PSI_MINUS, 3), atol=1e-15)
    assert_allclose(linalg.hermitian_eigenvalues(rho.mat), [0, 0, 0, 0, 0, 1], atol=1e-14)


def test_fig2_state_parameters():
    assert TwoParamState(0.03, 0.58, 3).s == pytest.approx(0.12, abs=1e-15)


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_grid_spectrum_and_entropy(d):
    for r in np.linspace(0, 1 / (2 * d - 4), 20):
        for t in np.linspace(0, 1, 20):
            if 1 - 2 * (d - 2) * r - t < -1e-12:
                continue
            st = TwoParamState(r, t, d)
            rho = states.build_two_param_state(r, t, d)
            assert_allclose(linalg.hermitian_eigenvalues(rho.mat), st.spectrum(), atol=1e-10)
            closed = -(3 * xlog2x(st.s) + xlog2x(t) + 2 * (d - 2) * xlog2x(r))
            assert abs(von_neumann_entropy(rho) - closed) < 1e-9


def test_deterministic_construction():
    a = states.build_two_param_state(0.1, 0.3, 4).mat
    b = states.build_two_param_state(0.1, 0.3, 4).mat
    assert a.tobytes() == b.tobytes()


def test_from_s_t_round_trip():
    st = TwoParamState.from_s_t(0.15, 0.45, 3)
    assert st.r == pytest.approx(0.05)
    assert st.s == pytest.approx(0.15)


@pytest.mark.parametrize(
    "r, t, d",
    [(0.3, 0.6, 3), (-0.01, 0.5, 3), (0.6, 0.0, 3), (0.0, 1.2, 3), (0.1, 0.5, 2), (0.1, 0.5, 3.5)],
)
def test_invalid_parameters(r, t, d):
    with pytest.raises(ParameterError):
        TwoParamState(r, t, d)


class TestValidation:
    def test_maximally_mixed(self):
        rho = states.validate_density_matrix(np.eye(6) / 6, 2, 3)
        assert rho.dim == 6

    def test_pure(self):
        m = np.zeros((6, 6))
        m[0, 0] = 1
        states.validate_density_matrix(m, 2, 3)

    def test_not_positive(self):
        with pytest.raises(NotPositiveError) as exc:
            states.validate_density_matrix(np.diag([1.5, -0.5, 0, 0, 0, 0]), 2, 3)
        assert exc.value.magnitude == pytest.approx(0.5)

    def test_trace(self):
        with pytest.raises(TraceNotOneError):
            states.validate_density_matrix(np.eye(6) / 5, 2, 3)

    def test_hermitian(self):
        m = np.eye(4) / 4
        m[0, 1] = 0.1
        with pytest.raises(NotHermitianError):
            states.validate_density_matrix(m, 2, 2)

    def test_read_only(self):
        rho = states.maximally_mixed(2, 3)
        with pytest.raises(ValueError):
            rho.mat[0, 0] = 1


class TestBell:
    def test_singlet_d2(self):
        expected = 0.5 * np.array([[0, 0, 0, 0], [0, 1, -1, 0], [0, -1, 1, 0], [0, 0, 0, 0]])
        assert_allclose(states.bell_projector(BellLabel.PSI_MINUS, 2), expected, atol=1e-15)

    def test_orthogonal(self):
        p = states.bell_projector(BellLabel.PHI_PLUS, 3)
        q = states.bell_projector(BellLabel.PSI_MINUS, 3)
        assert_allclose(p @ q, 0, atol=1e-15)

    def test_completeness_on_qubit_sector(self):
        total = sum(states.bell_projector(b, 3) for b in BellLabel)
        expected = np.diag([1, 1, 0, 1, 1, 0])
        assert_allclose(total, expected, atol=1e-15)
        assert np.trace(total).real == pytest.approx(4)

    @pytest.mark.parametrize("label", list(BellLabel))
    def test_idempotent(self, label):
        p = states.bell_projector(label, 4)
        assert_allclose(p @ p, p, atol=1e-15)
        assert np.trace(p).real == pytest.approx(1)


def test_random_classical_quantum_is_block_diagonal(rng):
    rho = states.random_classical_quantum(3, rng)
    assert_allclose(rho.mat[:3, 3:], 0)
