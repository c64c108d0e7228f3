"""Spin-chain model definitions and dense Hamiltonian construction.

Four periodic-boundary chains with an imaginary anisotropy ``i*gamma`` on
the in-plane exchange, making the Hamiltonian non-Hermitian but symmetric
under the combined action of a pi/2 spin rotation about z and complex
conjugation (RT symmetry):

* ``IXY``      - uniform transverse field
* ``IATXY``    - alternating (staggered) transverse field
* ``IXYZ_SR``  - adds a zz exchange, nearest-neighbour couplings
* ``IXYZ_LR``  - zz exchange with power-law couplings J/d(l,m)**alpha

The exchange scale J is set to 1 and all fields are quoted in units of J.
Site index l runs from 1, so odd sites carry field (h - h_a)/2 in the
staggered model.  Long-range distances are chordal ring distances
``min(|l-m|, N-|l-m|)`` and each unordered pair couples once.
"""

import enum
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .errors import DimensionLimitError, ParameterError

#: hard cap on chain length for dense 2**N construction
MAX_SITES = 14

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class Model(enum.Enum):
    """Tags for the four supported chain models."""

    IXY = "IXY"
    IATXY = "IATXY"
    IXYZ_SR = "IXYZ_SR"
    IXYZ_LR = "IXYZ_LR"


@dataclass(frozen=True)
class ModelParams:
    """Couplings of one chain model.

    Parameters
    ----------
    model : Model
        Which chain to build.
    n_sites : int
        Even chain length N (periodic boundary).  Dense construction is
        capped separately; large values are legal here because the
        momentum-space solver never builds the 2**N matrix.
    gamma : float
        Imaginary anisotropy of the in-plane exchange.
    h : float
        Uniform transverse field (units of J).
    h_a : float, optional
        Staggered field amplitude; only meaningful for IATXY.
    delta : float, optional
        zz exchange strength; only meaningful for IXYZ_SR / IXYZ_LR.
    alpha : float, optional
        Power-law decay exponent of the long-range couplings; only
        meaningful for IXYZ_LR.
    """

    model: Model
    n_sites: int
    gamma: float
    h: float
    h_a: float = 0.0
    delta: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        if not isinstance(self.model, Model):
            raise ParameterError(f"model must be a Model enum member, got {self.model!r}")
        n = self.n_sites
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise ParameterError(f"n_sites must be an integer, got {n!r}")
        if n < 2 or n % 2 != 0:
            raise ParameterError(f"n_sites must be even and >= 2, got {n}")
        for name in ("gamma", "h", "h_a", "delta", "alpha"):
            val = getattr(self, name)
            if not np.isfinite(val):
                raise ParameterError(f"{name} must be finite, got {val!r}")
        if self.h_a != 0.0 and self.model is not Model.IATXY:
            raise ParameterError(
                f"h_a is only meaningful for IATXY, got h_a={self.h_a} with {self.model.value}"
            )
        if self.delta != 0.0 and self.model not in (Model.IXYZ_SR, Model.IXYZ_LR):
            raise ParameterError(
                f"delta is only meaningful for IXYZ models, got delta={self.delta} "
                f"with {self.model.value}"
            )
        if self.model is Model.IXYZ_LR and self.alpha < 0:
            raise ParameterError(f"alpha must be >= 0, got {self.alpha}")
        if self.alpha != 0.0 and self.model is not Model.IXYZ_LR:
            raise ParameterError(
                f"alpha is only meaningful for IXYZ_LR, got alpha={self.alpha} "
                f"with {self.model.value}"
            )

    def with_h(self, h):
        """Copy of these parameters with the uniform field replaced."""
        return replace(self, h=float(h))


def _site_fields(params):
    """Per-site transverse field h_l = h + (-1)**l * h_a, l = 1..N."""
    l = np.arange(1, params.n_sites + 1)
    return params.h + ((-1.0) ** l) * params.h_a


def _pair_couplings(params):
    """Unordered coupled pairs as (j, k, J_jk) with 0-based j < k."""
    n = params.n_sites
    pairs = []
    if params.model is Model.IXYZ_LR:
        for j in range(n):
            for k in range(j + 1, n):
                d = min(k - j, n - (k - j))
                pairs.append((j, k, float(d) ** (-params.alpha)))
    else:
        seen = set()
        for j in range(n):
            a, b = sorted((j, (j + 1) % n))
            if (a, b) not in seen:
                seen.add((a, b))
                pairs.append((a, b, 1.0))
    return pairs


def _single_site(op, site, n):
    """CSR matrix of a single-site operator embedded in the N-site chain.

    Site 0 maps to the most significant qubit of the tensor-product index.
    """
    left = sp.identity(2**site, dtype=complex, format="csr")
    right = sp.identity(2 ** (n - site - 1), dtype=complex, format="csr")
    return sp.kron(sp.kron(left, sp.csr_matrix(op)), right, format="csr")


def _assemble_sparse(params):
    """Sparse (CSR) chain Hamiltonian; shared backend of build_hamiltonian.

    Kept private: the documented contract of this module is dense output,
    but the quench engine reuses this representation for its
    matrix-exponential propagator.
    """
    n = params.n_sites
    dim = 2**n
    sx = [_single_site(_SX, j, n) for j in range(n)]
    sy = [_single_site(_SY, j, n) for j in range(n)]
    sz = [_single_site(_SZ, j, n) for j in range(n)]

    ham = sp.csr_matrix((dim, dim), dtype=complex)
    g = params.gamma
    for j, k, jjk in _pair_couplings(params):
        bond = (1.0 + 1.0j * g) * (sx[j] @ sx[k]) + (1.0 - 1.0j * g) * (sy[j] @ sy[k])
        if params.delta != 0.0:
            bond = bond + params.delta * (sz[j] @ sz[k])
        ham = ham + (jjk / 4.0) * bond
    for j, h_l in enumerate(_site_fields(params)):
        ham = ham - (h_l / 2.0) * sz[j]
    return ham.tocsr()


def build_hamiltonian(params):
    """Dense complex Hamiltonian matrix of the requested chain.

    Parameters
    ----------
    params : ModelParams

    Returns
    -------
    numpy.ndarray
        Complex matrix of shape (2**N, 2**N).

    Raises
    ------
    DimensionLimitError
        If ``params.n_sites`` exceeds the dense guard (14 sites).
    """
    if params.n_sites > MAX_SITES:
        raise DimensionLimitError(
            f"dense construction limited to {MAX_SITES} sites, got {params.n_sites}"
        )
    return _assemble_sparse(params).toarray()


def analytic_ep(params):
    """Closed-form exceptional-point field h_ep of the model.

    For fields above this value the spectrum is entirely real (unbroken
    regime); below it complex-conjugate eigenvalue pairs appear.  The
    long-range value scales with the ring's coupling sum
    ``sum_{d=1}^{N/2} d**(-alpha)``.
    """
    g2 = params.gamma**2
    if params.model is Model.IXY:
        return float(np.sqrt(1.0 + g2))
    if params.model is Model.IATXY:
        return float(np.sqrt(1.0 + params.h_a**2 + g2))
    if params.model is Model.IXYZ_SR:
        return float(np.sqrt((1.0 + params.delta) ** 2 + g2))
    if params.model is Model.IXYZ_LR:
        dists = np.arange(1, params.n_sites // 2 + 1, dtype=float)
        kac = np.sum(dists ** (-params.alpha))
        return float(np.sqrt((1.0 + params.delta) ** 2 + g2) * kac)
    raise ParameterError(f"unknown model {params.model!r}")


def rt_symmetry_residual(ham):
    """Frobenius deviation of H from RT symmetry.

    R is the diagonal rotation exp(-i (pi/4) sum_l sigma^z_l); the
    antilinear T acts as complex conjugation, so the residual is
    ``|| R conj(H) R^-1 - H ||_F``.  Zero (to roundoff) for every
    Hamiltonian built by this module.
    """
    ham = np.asarray(ham)
    dim = ham.shape[0]
    if ham.ndim != 2 or ham.shape[0] != ham.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {ham.shape}")
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise ParameterError(f"matrix dimension {dim} is not a power of two")
    # sum of sigma^z eigenvalues for basis index k: n - 2 * popcount(k)
    popcount = np.array([bin(k).count("1") for k in range(dim)])
    r_diag = np.exp(-0.25j * np.pi * (n - 2 * popcount))
    transformed = (r_diag[:, None] * np.conj(ham)) * (1.0 / r_diag)[None, :]
    return float(np.linalg.norm(transformed - ham))
