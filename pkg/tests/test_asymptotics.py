import numpy as np
import pytest

from conftest import TABLE1
from corrlog.asymptotics import (
    acorr,
    fisher_jacobian_diag,
    omega_gamma,
    omega_monte_carlo,
    omega_normal_iid,
    omega_phi,
    omega_rho,
)
from corrlog.jacobians import elimination_indices
from corrlog.structures import make_toeplitz, random_correlation

QUANTITIES = ("avar_rho", "avar_phi", "avar_gamma", "acorr_gamma")


def blocks(C):
    Omega = omega_normal_iid(C)
    og = omega_gamma(Omega, C)
    return {
        "avar_rho": omega_rho(Omega),
        "avar_phi": omega_phi(Omega, C),
        "avar_gamma": og,
        "acorr_gamma": acorr(og),
    }


@pytest.mark.parametrize("rho", sorted(TABLE1))
@pytest.mark.parametrize("quantity", QUANTITIES)
def test_reference_table(rho, quantity):
    got = blocks(make_toeplitz(rho, 3))[quantity]
    np.testing.assert_allclose(got, TABLE1[rho][quantity], rtol=0, atol=1e-3)


def test_identity_gives_identity():
    for name, M in blocks(np.eye(4)).items():
        np.testing.assert_allclose(M, np.eye(6), atol=1e-14, err_msg=name)


def test_omega_structure(rng):
    C = random_correlation(4, rng).values
    Omega = omega_normal_iid(C)
    _, _, dg = elimination_indices(4)
    assert np.all(Omega[dg] == 0) and np.all(Omega[:, dg] == 0)
    swap = np.arange(16).reshape(4, 4).T.ravel()  # vec position of (j, i)
    np.testing.assert_allclose(Omega[np.ix_(swap, swap)], Omega, atol=1e-15)
    np.testing.assert_allclose(Omega, Omega.T, atol=1e-15)


def test_correlation_variance_closed_form(rng):
    C = random_correlation(5, rng).values
    c = C[np.tril_indices(5, -1)]
    rows, cols = np.tril_indices(5, -1)
    order = np.lexsort((rows, cols))  # vecl order is column-major
    np.testing.assert_allclose(np.diag(omega_rho(omega_normal_iid(C))),
                               (1 - c[order] ** 2) ** 2, atol=1e-14)


def test_fisher_variance_stabilization(rng):
    for n in (3, 6):
        C = random_correlation(n, rng).values
        Op = omega_phi(omega_normal_iid(C), C)
        np.testing.assert_allclose(np.diag(Op), 1.0, atol=1e-12)
        Orho = omega_rho(omega_normal_iid(C))
        np.testing.assert_allclose(acorr(Op), acorr(Orho), atol=1e-12)


def test_covariances_are_psd(rng):
    for n in (3, 5, 8):
        C = random_correlation(n, rng).values
        for name, M in blocks(C).items():
            np.testing.assert_allclose(M, M.T, atol=1e-12)
            assert np.linalg.eigvalsh(M)[0] >= -1e-10, name


def test_fisher_jacobian_diag():
    d = fisher_jacobian_diag(make_toeplitz(0.5, 3))
    np.testing.assert_allclose(d, [1 / 0.75, 1 / (1 - 0.0625), 1 / 0.75])
    assert np.all(d >= 1)


def test_acorr_rejects_non_positive_diagonal():
    with pytest.raises(ValueError):
        acorr(np.zeros((2, 2)))


def test_monte_carlo_is_seed_deterministic():
    C = make_toeplitz(0.5, 3)
    a = omega_monte_carlo(C, T=2000, reps=10, seed=7)
    b = omega_monte_carlo(C, T=2000, reps=10, seed=7)
    c = omega_monte_carlo(C, T=2000, reps=10, seed=8)
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, c)


def test_monte_carlo_identity_limit():
    reps = 200
    Om = omega_monte_carlo(np.eye(2), T=20_000, reps=reps, seed=1, method="plain")
    # variance of a sample variance over reps draws: relative s.e. sqrt(2/reps)
    assert abs(Om[1, 1] - 1.0) <= 3 * np.sqrt(2 / reps)


def test_monte_carlo_control_variate_agrees(rng):
    C = make_toeplitz(0.9, 3)
    Om = omega_monte_carlo(C, T=20_000, reps=100, seed=3)
    assert np.max(np.abs(Om - omega_normal_iid(C))) <= 2e-2


def test_monte_carlo_arguments():
    with pytest.raises(ValueError):
        omega_monte_carlo(np.eye(2), T=10)
    with pytest.raises(ValueError):
        omega_monte_carlo(np.eye(2), method="bootstrap")
