"""Dense non-Hermitian linear algebra.

Eigendecomposition with deterministic ordering and defectiveness
detection, the biorthogonal metric of a diagonalizable spectrum,
metric-weighted inner products, spectral time evolution, and a
matrix-exponential reference propagator that remains valid for
defective matrices.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .errors import DefectiveSpectrumError, EigensolverError, ParameterError

#: eigenvector-matrix condition estimate above which a spectrum is
#: flagged defective (eigenvectors numerically coalescing)
DEFECT_COND_THRESHOLD = 1e10

#: relative residual ||H P - P diag(w)|| / ||H|| above which the
#: decomposition is rejected as defective/unconverged
RESIDUAL_THRESHOLD = 1e-8


@dataclass
class Spectrum:
    """Right-eigenvector decomposition of a complex matrix.

    ``eigenvalues`` are sorted by ascending real part, ties broken by
    ascending imaginary part, and the columns of ``p`` follow the same
    order.  The inverse eigenvector matrix is materialised lazily; most
    consumers only need ``solve`` (an LU solve against P), which avoids
    forming the inverse explicitly.
    """

    eigenvalues: np.ndarray
    p: np.ndarray
    defective: bool
    cond_estimate: float
    residual: float
    _lu: tuple = field(default=None, repr=False)
    _inverse: np.ndarray = field(default=None, repr=False)

    @property
    def dim(self):
        return self.p.shape[0]

    def _lu_factors(self):
        if self._lu is None:
            self._lu = scipy.linalg.lu_factor(self.p)
        return self._lu

    def solve(self, rhs):
        """Return P^-1 @ rhs without forming the inverse."""
        return scipy.linalg.lu_solve(self._lu_factors(), rhs)

    @property
    def inverse(self):
        """Explicit P^-1 (computed once, cached)."""
        if self._inverse is None:
            self._inverse = self.solve(np.eye(self.dim, dtype=complex))
        return self._inverse


@dataclass(frozen=True)
class Metric:
    """Hermitian positive-definite metric Theta = (P^-1)^dagger P^-1.

    Right eigenvectors of the source Hamiltonian are orthonormal under
    ``metric_inner`` with this matrix, and H^dagger Theta = Theta H.
    """

    matrix: np.ndarray


def eig_complex(mat):
    """Full right-eigendecomposition of a dense complex matrix.

    Eigenpairs are sorted ascending by (Re, Im).  The defective flag is
    set when the eigenvector matrix is ill-conditioned (estimate above
    ``DEFECT_COND_THRESHOLD``) or the relative decomposition residual
    exceeds ``RESIDUAL_THRESHOLD``; such spectra may still be inspected
    but are rejected by the operations that need a complete eigenbasis.

    Raises
    ------
    EigensolverError
        If the underlying QR iteration fails to converge.
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {mat.shape}")
    if mat.shape[0] < 1:
        raise ParameterError("matrix dimension must be >= 1")
    if not np.all(np.isfinite(mat)):
        raise ParameterError("matrix entries must be finite")
    try:
        w, p = np.linalg.eig(mat)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare backend failure
        raise EigensolverError(f"eigensolver did not converge: {exc}", details=exc) from exc

    order = np.lexsort((w.imag, w.real))
    w = w[order]
    p = p[:, order]

    norm_h = np.linalg.norm(mat)
    if norm_h == 0.0:
        residual = 0.0
    else:
        residual = np.linalg.norm(mat @ p - p * w[None, :]) / norm_h

    cond = _cond1_estimate(p)
    defective = bool(cond > DEFECT_COND_THRESHOLD or residual > RESIDUAL_THRESHOLD)
    return Spectrum(eigenvalues=w, p=p, defective=defective,
                    cond_estimate=float(cond), residual=float(residual))


def _cond1_estimate(p):
    """1-norm condition estimate of the eigenvector matrix.

    Uses an exact inverse for small matrices and a Hager-style 1-norm
    estimator on the LU factors for large ones, so flagging stays cheap
    even at full-chain dimensions.
    """
    n = p.shape[0]
    norm_p = np.linalg.norm(p, 1)
    try:
        if n <= 128:
            inv_norm = np.linalg.norm(np.linalg.inv(p), 1)
        else:
            lu = scipy.linalg.lu_factor(p)
            op = scipy.sparse.linalg.LinearOperator(
                (n, n),
                matvec=lambda x: scipy.linalg.lu_solve(lu, x),
                rmatvec=lambda x: scipy.linalg.lu_solve(lu, x, trans=2),
                dtype=complex,
            )
            inv_norm = scipy.sparse.linalg.onenormest(op)
    except (np.linalg.LinAlgError, RuntimeError):
        return np.inf
    return norm_p * inv_norm


def biortho_metric(spec):
    """Metric Theta = (P^-1)^dagger P^-1 of a non-defective spectrum.

    The product is symmetrised, (Theta + Theta^dagger)/2, to scrub the
    roundoff-level anti-Hermitian part.

    Raises
    ------
    DefectiveSpectrumError
        If the spectrum is flagged defective (no complete eigenbasis,
        which happens beyond the exceptional point).
    """
    if spec.defective:
        raise DefectiveSpectrumError(
            "cannot biorthogonalize a defective spectrum; the eigenvector "
            "matrix is only invertible in the unbroken regime"
        )
    pinv = spec.inverse
    theta = pinv.conj().T @ pinv
    theta = 0.5 * (theta + theta.conj().T)
    return Metric(matrix=theta)


def metric_inner(metric, u, v):
    """Metric-weighted inner product u^dagger Theta v."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    dim = metric.matrix.shape[0]
    if u.shape != (dim,) or v.shape != (dim,):
        raise ParameterError(
            f"state dimensions {u.shape}/{v.shape} do not match metric dimension {dim}"
        )
    return complex(u.conj() @ (metric.matrix @ v))


def evolve(spec, psi0, t):
    """Spectral time evolution P exp(-i diag(w) t) P^-1 psi0.

    Exact (unnormalised) propagation; in broken regimes the result grows
    or decays exponentially with t, which is expected — normalisation
    belongs to the echo, not the propagator.

    Raises
    ------
    DefectiveSpectrumError
        If the spectrum lacks a complete eigenbasis; use
        ``matexp_reference`` for defective matrices.
    """
    if spec.defective:
        raise DefectiveSpectrumError(
            "spectral evolution requires a complete eigenbasis; "
            "use matexp_reference for defective matrices"
        )
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (spec.dim,):
        raise ParameterError(
            f"state dimension {psi0.shape} does not match spectrum dimension {spec.dim}"
        )
    coeff = spec.solve(psi0)
    t = np.asarray(t, dtype=float)
    if t.ndim == 0:
        return spec.p @ (np.exp(-1j * spec.eigenvalues * float(t)) * coeff)
    if t.ndim != 1:
        raise ParameterError(f"t must be a scalar or 1-D array, got shape {t.shape}")
    phases = np.exp(-1j * spec.eigenvalues[:, None] * t[None, :])
    return spec.p @ (phases * coeff[:, None])


def matexp_reference(mat, t):
    """Reference propagator exp(-i M t) via scaling-and-squaring.

    Valid for defective matrices as well (the only evolution route once
    eigenvectors coalesce).  Backward-error controlled by the Pade
    implementation underneath.

    Raises
    ------
    OverflowError
        If the result overflows floating point for extreme ||M t||.
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat * t)):
        raise ParameterError("matrix entries times t must be finite")
    result = scipy.linalg.expm(-1j * t * mat)
    if not np.all(np.isfinite(result)):
        raise OverflowError(
            f"matrix exponential overflowed for ||M t|| ~ {np.linalg.norm(mat) * abs(t):.3g}"
        )
    return result


def jordan_chain_2x2(mat):
    """Jordan chain (eigenvalue, v, u) of a defective 2x2 matrix.

    ``v`` is the unit eigenvector and ``u`` the minimal-norm generalised
    vector with (M - lam I) u = v; minimality makes u orthogonal to v.
    Intended for the momentum-block analysis at the exceptional point,
    where a quench block has a double eigenvalue and a single
    eigenvector.

    Raises
    ------
    ParameterError
        If the matrix is not 2x2 or is diagonalizable (distinct
        eigenvalues or a scalar multiple of the identity).
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (2, 2):
        raise ParameterError(f"expected a 2x2 matrix, got shape {mat.shape}")
    lam = 0.5 * (mat[0, 0] + mat[1, 1])
    nil = mat - lam * np.eye(2)
    scale = max(np.linalg.norm(mat), 1.0)
    if np.linalg.norm(nil @ nil) > 1e-10 * scale**2 or np.linalg.norm(nil) < 1e-14 * scale:
        raise ParameterError("matrix is not defective (needs a nontrivial nilpotent part)")
    # range(nil) = kernel(nil) for a rank-1 nilpotent: take the larger column
    col = nil[:, np.argmax(np.linalg.norm(nil, axis=0))]
    v = col / np.linalg.norm(col)
    u, *_ = np.linalg.lstsq(nil, v, rcond=None)
    return lam, v, u
