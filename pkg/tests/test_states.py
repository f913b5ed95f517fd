import numpy as np
import pytest
from hypothesis import given

from qcorr import qmat
from qcorr.states import (
    BELL_KETS,
    Family,
    InvalidStateError,
    NotXStateError,
    StateFamilyParam,
    TwoQubitState,
    XState,
    as_x_state,
    bell,
    bloch_decompose,
    bloch_matrix,
    bloch_reconstruct,
    family_matrix,
    local_phase_unitary,
    make_family,
    random_state,
    random_unitary2,
)
from strategies import alphas, density_matrices


def test_state_is_read_only():
    s = bell("phi+")
    with pytest.raises(ValueError):
        s.rho[0, 0] = 0


@pytest.mark.parametrize(
    "m,msg",
    [
        (np.eye(3) / 3, "4x4"),
        (np.eye(4), "trace"),
        (np.triu(np.ones((4, 4))) / 4, "Hermitian"),
        (np.full((4, 4), np.nan), "non-finite"),
    ],
)
def test_invalid_matrices_raise(m, msg):
    with pytest.raises(InvalidStateError, match=msg):
        TwoQubitState(m)


def test_negative_eigenvalue_reported():
    with pytest.raises(InvalidStateError) as info:
        TwoQubitState(np.diag([1.0, 0.2, 0.0, -0.2]))
    assert info.value.eigenvalue == pytest.approx(-0.2)


def test_lenient_mode_flags_non_positive():
    s = TwoQubitState(np.diag([1.0, 0.2, 0.0, -0.2]), strict=False)
    assert not s.is_positive
    assert s.min_eigenvalue == pytest.approx(-0.2)


def test_purity_of_pure_and_mixed():
    assert bell("psi-").purity() == pytest.approx(1.0)
    assert TwoQubitState(np.eye(4) / 4).purity() == pytest.approx(0.25)


def test_bloch_of_phi_plus():
    b = bloch_decompose(bell("phi+"))
    np.testing.assert_allclose(b.x, 0, atol=1e-15)
    np.testing.assert_allclose(b.y, 0, atol=1e-15)
    np.testing.assert_allclose(b.T, 0.5 * np.diag([1, -1, 1]), atol=1e-15)


@given(density_matrices())
def test_bloch_round_trip(rho):
    s = TwoQubitState(rho)
    back = bloch_reconstruct(bloch_decompose(s))
    np.testing.assert_allclose(back.rho, s.rho, atol=1e-12)


@given(density_matrices())
def test_purity_identity(rho):
    b = bloch_decompose(rho)
    lhs = TwoQubitState(rho).purity()
    rhs = 0.25 + b.x @ b.x + b.y @ b.y + np.sum(b.T**2)
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_bloch_matrix_maximally_mixed():
    b = bloch_decompose(np.eye(4) / 4)
    np.testing.assert_allclose(bloch_matrix(b), np.eye(4) / 4)


@pytest.mark.parametrize("name", sorted(BELL_KETS))
def test_bell_states_are_pure(name):
    assert bell(name).purity() == pytest.approx(1.0)


def test_unknown_bell_name():
    with pytest.raises(ValueError):
        bell("phi0")


@given(alphas)
def test_families_are_states(a):
    for fam in Family:
        s = make_family(StateFamilyParam(fam, a))
        assert s.is_positive


def test_family_alpha_range():
    with pytest.raises(ValueError):
        StateFamilyParam(Family.PURE, 1.5)
    with pytest.raises(ValueError):
        family_matrix("werner", -0.1)


def test_pure_family_entries():
    rho = family_matrix(Family.PURE, 0.3)
    assert rho[0, 0] == pytest.approx(0.7)
    assert rho[3, 3] == pytest.approx(0.3)
    assert rho[0, 3] == pytest.approx(np.sqrt(0.21))


def test_make_family_accepts_pair():
    np.testing.assert_allclose(make_family("vp", 0.25).rho, family_matrix(Family.VEDRAL_PLENIO, 0.25))


def test_x_state_round_trip_with_phases():
    x = XState(0.4, 0.1, 0.2, 0.3, 0.2, 0.1)
    u = local_phase_unitary(0.7, -1.1)
    rho = u.conj().T @ x.to_matrix() @ u
    got = as_x_state(rho)
    np.testing.assert_allclose(got.elements(), x.elements(), atol=1e-14)
    v = local_phase_unitary(got.phase_a, got.phase_b)
    np.testing.assert_allclose(v @ rho @ v.conj().T, x.to_matrix(), atol=1e-14)


def test_non_x_state_rejected():
    with pytest.raises(NotXStateError):
        as_x_state(random_state(np.random.default_rng(0)))


def test_x_state_validity():
    assert XState(0.25, 0.25, 0.25, 0.25, 0.25, 0.0).is_valid()
    assert not XState(0.25, 0.25, 0.25, 0.25, 0.3, 0.0).is_valid()
    assert not XState(0.5, 0.25, 0.25, 0.25, 0.0, 0.0).is_valid()


def test_random_unitary_is_unitary(rng):
    u = random_unitary2(rng)
    np.testing.assert_allclose(u @ u.conj().T, qmat.I2, atol=1e-14)


def test_random_state_is_full_rank(rng):
    assert random_state(rng).min_eigenvalue > 0
