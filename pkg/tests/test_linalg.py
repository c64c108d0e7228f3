"""Dense non-Hermitian linear algebra: spectra, metric, evolution."""

import numpy as np
import pytest
import scipy.linalg

from rtquench.errors import DefectiveSpectrumError, ParameterError
from rtquench.linalg import (
    Metric,
    Spectrum,
    biortho_metric,
    eig_complex,
    evolve,
    jordan_chain_2x2,
    matexp_reference,
    metric_inner,
)
from rtquench.models import Model, ModelParams, build_hamiltonian


def random_diagonalizable(rng, n, real_spectrum=False):
    """Well-conditioned random matrix with known spectrum."""
    lam = rng.standard_normal(n) + (0 if real_spectrum else 1j * rng.standard_normal(n))
    p = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    p += 3 * np.eye(n)  # keep the eigenbasis well conditioned
    return p @ np.diag(lam) @ np.linalg.inv(p), np.sort_complex(lam)


def test_eig_sorted_and_reconstructs():
    rng = np.random.default_rng(11)
    m, lam = random_diagonalizable(rng, 7)
    spec = eig_complex(m)
    # deterministic (Re, Im) lexicographic order
    order = np.lexsort((spec.eigenvalues.imag, spec.eigenvalues.real))
    assert np.array_equal(order, np.arange(7))
    assert np.allclose(np.sort_complex(spec.eigenvalues), lam, atol=1e-10)
    recon = spec.p @ np.diag(spec.eigenvalues) @ np.linalg.inv(spec.p)
    assert np.allclose(recon, m, atol=1e-9)
    assert not spec.defective
    assert spec.residual < 1e-10


def test_eig_flags_defective():
    spec = eig_complex(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert spec.defective
    with pytest.raises(DefectiveSpectrumError):
        biortho_metric(spec)
    with pytest.raises(DefectiveSpectrumError):
        evolve(spec, np.array([1.0, 0.0]), np.array([0.0, 1.0]))


def test_spectrum_solve_matches_inverse():
    rng = np.random.default_rng(3)
    m, _ = random_diagonalizable(rng, 6)
    spec = eig_complex(m)
    x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    assert np.allclose(spec.solve(x), np.linalg.solve(spec.p, x), atol=1e-11)
    assert np.allclose(spec.inverse @ spec.p, np.eye(6), atol=1e-11)


def test_metric_properties():
    """Theta is Hermitian positive definite and intertwines H with H^dagger."""
    p = ModelParams(model=Model.IXYZ_SR, n_sites=8, gamma=0.25, h=3.0, delta=0.1)
    ham = build_hamiltonian(p)
    spec = eig_complex(ham)
    metric = biortho_metric(spec)
    theta = metric.matrix
    assert np.allclose(theta, theta.conj().T, atol=1e-12)
    evals = np.linalg.eigvalsh(theta)
    assert evals.min() > 0
    inter = ham.conj().T @ theta - theta @ ham
    assert np.linalg.norm(inter) < 1e-8


def test_metric_orthonormalizes_eigenvectors():
    rng = np.random.default_rng(42)
    m, _ = random_diagonalizable(rng, 5)
    spec = eig_complex(m)
    metric = biortho_metric(spec)
    gram = np.empty((5, 5), dtype=complex)
    for i in range(5):
        for j in range(5):
            gram[i, j] = metric_inner(metric, spec.p[:, i], spec.p[:, j])
    assert np.allclose(gram, np.eye(5), atol=1e-10)


def test_metric_inner_dimension_check():
    metric = Metric(matrix=np.eye(3))
    with pytest.raises(ParameterError):
        metric_inner(metric, np.ones(2), np.ones(3))


def test_evolve_matches_matexp_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(5):
        m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        spec = eig_complex(m)
        if spec.defective:
            continue
        psi0 = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        t = np.array([0.0, 0.3, 1.1, 2.7])
        states = evolve(spec, psi0, t)
        for k, tk in enumerate(t):
            ref = matexp_reference(m, tk) @ psi0
            assert np.max(np.abs(states[:, k] - ref)) < 1e-8


def test_evolve_does_not_normalize():
    """Norm growth of broken-regime evolution must be preserved."""
    m = np.array([[1j, 0.0], [0.0, -1j]])  # e^{-iMt} = diag(e^t, e^-t)
    spec = eig_complex(m)
    out = evolve(spec, np.array([1.0, 1.0], dtype=complex), np.array([2.0]))
    assert abs(out[0, 0] - np.exp(2.0)) < 1e-10
    assert abs(out[1, 0] - np.exp(-2.0)) < 1e-12


def test_evolve_semigroup():
    rng = np.random.default_rng(5)
    m, _ = random_diagonalizable(rng, 4)
    spec = eig_complex(m)
    psi0 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    one_step = evolve(spec, psi0, np.array([0.7]))[:, 0]
    two_step = evolve(spec, one_step, np.array([0.5]))[:, 0]
    direct = evolve(spec, psi0, np.array([1.2]))[:, 0]
    assert np.max(np.abs(two_step - direct)) < 1e-8


def test_matexp_nilpotent_closed_form():
    """exp(-i t M) for nilpotent M terminates: [[1, -it], [0, 1]]."""
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    t = 2.5
    assert np.allclose(matexp_reference(m, t),
                       np.array([[1.0, -1j * t], [0.0, 1.0]]), atol=1e-14)


@pytest.mark.filterwarnings("ignore:overflow encountered")
def test_matexp_overflow_raises():
    m = np.diag([0.0, 1e5j])  # e^{-i t M} grows like e^{1e5 t}
    with pytest.raises(OverflowError):
        matexp_reference(m, 10.0)


def test_matexp_agrees_with_scipy():
    rng = np.random.default_rng(17)
    m = rng.standard_normal((5, 5))
    assert np.allclose(matexp_reference(m, 0.9),
                       scipy.linalg.expm(-0.9j * m), atol=1e-12)


def test_jordan_chain_two_by_two():
    lam = 0.7
    m = np.array([[lam, 1.0], [0.0, lam]])
    ev, v, u = jordan_chain_2x2(m)
    assert abs(ev - lam) < 1e-12
    # v spans the kernel of (M - lam), u maps onto v under it
    assert np.linalg.norm((m - lam * np.eye(2)) @ v) < 1e-12
    assert np.linalg.norm((m - lam * np.eye(2)) @ u - v) < 1e-12
    assert abs(np.vdot(v, u)) < 1e-12  # minimal-norm chain vector
