"""Dense complex-Hermitian linear algebra for small operators.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
The eigensolver is a cyclic complex Jacobi iteration: at the matrix sizes
this package deals with (at most 256x256) it is fast enough, fully
deterministic and has no dependency beyond numpy array arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import (
    ConvergenceFailure,
    DomainError,
    InvalidInput,
    NonHermitianInput,
    NotPositive,
    SizeTooLarge,
    ZeroTrace,
)

MAX_DIM = 256
HERMITIAN_ATOL = 1e-12
CLAMP_TOL = 1e-12
NEGATIVE_FAIL = 1e-8
JACOBI_TOL = 1e-13
ROUNDOFF_FLOOR = 1e-14
MAX_SWEEPS = 100

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)
# sigma_+ maps |1> -> |0>, with sigma_z |0> = +|0>
SIGMA_PLUS = (SIGMA_X + 1j * SIGMA_Y) / 2
SIGMA_MINUS = (SIGMA_X - 1j * SIGMA_Y) / 2


def as_matrix(a, name: str = "A") -> np.ndarray:
    """Return ``a`` as a 2-D complex128 array (copy-free when possible)."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise InvalidInput(f"{name} must be a 2-D matrix, got shape {m.shape}")
    return m


def check_hermitian(a, name: str = "A") -> np.ndarray:
    """Validate a square Hermitian matrix and return its exact Hermitian part.

    The tolerance is ``1e-12`` on ``max|A - A^H|``, scaled up by the largest
    entry magnitude when that exceeds one.
    """
    m = as_matrix(a, name)
    n, k = m.shape
    if n != k or n == 0:
        raise InvalidInput(f"{name} must be square and non-empty, got shape {m.shape}")
    if n > MAX_DIM:
        raise SizeTooLarge(f"{name} has dimension {n} > {MAX_DIM}")
    if not np.all(np.isfinite(m)):
        raise InvalidInput(f"{name} has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(m))))
    err = float(np.max(np.abs(m - m.conj().T)))
    if err > HERMITIAN_ATOL * scale:
        raise NonHermitianInput(f"{name} is not Hermitian (max |A - A^H| = {err:.3e})")
    return (m + m.conj().T) / 2


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self, values=None) -> np.ndarray:
        """``sum_i values[i] |psi_i><psi_i|`` (defaults to the eigenvalues)."""
        w = self.eigenvalues if values is None else np.asarray(values)
        v = self.eigenvectors
        out = (v * w) @ v.conj().T
        return (out + out.conj().T) / 2

    def in_basis(self, op) -> np.ndarray:
        """Matrix elements ``<psi_i| op |psi_j>``."""
        v = self.eigenvectors
        return v.conj().T @ np.asarray(op, dtype=complex) @ v


def _jacobi(a: np.ndarray, tol: float, max_sweeps: int):
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    norm = float(np.linalg.norm(a))
    if n == 1 or norm == 0.0:
        return a.diagonal().real.copy(), v
    skip = 1e-18 * norm
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(a.diagonal())))
        if off <= tol * norm:
            return a.diagonal().real.copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= skip:
                    continue
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ph = apq / mag
                # U = diag(1, conj(ph)) @ [[c, s], [-s, c]] zeroes a[p, q]
                u10 = -s * ph.conjugate()
                u11 = c * ph.conjugate()
                cp = a[:, p].copy()
                cq = a[:, q]
                a[:, p] = c * cp + u10 * cq
                a[:, q] = s * cp + u11 * cq
                rp = a[p, :].copy()
                rq = a[q, :]
                a[p, :] = c * rp + u10.conjugate() * rq
                a[q, :] = s * rp + u11.conjugate() * rq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp + u10 * vq
                v[:, q] = s * vp + u11 * vq
    raise ConvergenceFailure(
        f"Jacobi iteration did not converge in {max_sweeps} sweeps "
        f"(off-diagonal norm {off:.3e}, matrix norm {norm:.3e})"
    )


def eigh(a, *, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : array_like
        Square Hermitian matrix.
    tol : float
        Stop once the off-diagonal Frobenius norm is ``<= tol * ||a||_F``.
    max_sweeps : int
        Raise :class:`ConvergenceFailure` after this many full sweeps.

    Returns
    -------
    SpectralDecomposition
        Eigenvalues ascending (stable order for ties), eigenvectors as columns.
    """
    m = check_hermitian(a).copy()
    w, v = _jacobi(m, tol, max_sweeps)
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order], np.ascontiguousarray(v[:, order]))


class DensityMatrix:
    """A unit-trace positive semidefinite operator with its cached spectrum.

    Build one with :func:`make_density` (from a matrix) or
    :meth:`DensityMatrix.from_spectrum` (from known eigenpairs; this keeps
    tiny populations at full relative precision).
    """

    __slots__ = ("_matrix", "_spectrum")

    def __init__(self, matrix: np.ndarray, spectrum: SpectralDecomposition):
        matrix = np.array(matrix, dtype=complex)
        matrix.setflags(write=False)
        self._matrix = matrix
        self._spectrum = spectrum

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def spectrum(self) -> SpectralDecomposition:
        return self._spectrum

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.array(self._matrix, dtype=dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim}, eigenvalues={np.round(self._spectrum.eigenvalues, 6)})"

    @classmethod
    def from_spectrum(cls, eigenvalues, eigenvectors) -> "DensityMatrix":
        """Build a state from populations and orthonormal eigenvector columns.

        Populations are clamped at zero (failing below ``-1e-8``) and
        renormalized to sum to one.
        """
        p = np.asarray(eigenvalues, dtype=float).copy()
        v = as_matrix(eigenvectors, "eigenvectors")
        n = p.shape[0]
        if p.ndim != 1 or v.shape != (n, n):
            raise InvalidInput(f"eigenvectors shape {v.shape} does not match {n} eigenvalues")
        if np.max(np.abs(v.conj().T @ v - np.eye(n))) > 1e-10:
            raise InvalidInput("eigenvectors are not orthonormal")
        if np.min(p) < -NEGATIVE_FAIL:
            raise NotPositive(f"eigenvalue {np.min(p):.3e} < -{NEGATIVE_FAIL}")
        p = np.clip(p, 0.0, None)
        total = float(p.sum())
        if total <= 1e-300:
            raise ZeroTrace("populations sum to zero")
        p /= total
        order = np.argsort(p, kind="stable")
        spec = SpectralDecomposition(p[order], np.ascontiguousarray(v[:, order]))
        return cls(spec.reconstruct(), spec)


def make_density(a) -> DensityMatrix:
    """Normalize a PSD Hermitian operator to a density matrix.

    Eigenvalues in ``[-1e-8, 0)`` are treated as roundoff and clamped to
    zero; if any of them is below ``-1e-12`` the matrix is rebuilt from the
    clamped spectrum. Anything more negative raises :class:`NotPositive`.
    Positive eigenvalues under ``1e-14`` carry no significant digits once the
    matrix is given entrywise and are set to zero as well, since ``sqrt``
    would amplify them to ~1e-8.
    """
    if isinstance(a, DensityMatrix):
        return a
    m = check_hermitian(a)
    tr = float(np.trace(m).real)
    if not tr > 1e-300:
        raise ZeroTrace(f"trace {tr!r} is not positive")
    m = m / tr
    spec = eigh(m)
    p = spec.eigenvalues
    if p[0] < -NEGATIVE_FAIL:
        raise NotPositive(f"eigenvalue {p[0]:.3e} < -{NEGATIVE_FAIL}")
    if p[0] >= ROUNDOFF_FLOOR:
        return DensityMatrix(m, spec)
    clipped = np.where(p < ROUNDOFF_FLOOR, 0.0, p)
    clipped /= clipped.sum()
    spec = SpectralDecomposition(clipped, spec.eigenvectors.copy())
    if p[0] < -CLAMP_TOL:
        m = spec.reconstruct()
    return DensityMatrix(m, spec)


Operand = Union[np.ndarray, DensityMatrix, SpectralDecomposition]


def _spectrum_of(a: Operand) -> SpectralDecomposition:
    if isinstance(a, SpectralDecomposition):
        return a
    if isinstance(a, DensityMatrix):
        return a.spectrum
    return eigh(a)


def spectral_fn(a: Operand, f: Callable[[np.ndarray], np.ndarray], *, nonneg: bool = False) -> np.ndarray:
    """Apply a real function to a Hermitian operator through its spectrum.

    With ``nonneg=True`` eigenvalues in ``[-1e-12, 0)`` are clamped to zero
    before ``f`` is applied, and anything lower raises :class:`DomainError`
    (use this for ``sqrt``). A non-finite ``f`` value also raises
    :class:`DomainError`.
    """
    spec = _spectrum_of(a)
    w = spec.eigenvalues
    if nonneg:
        if w[0] < -CLAMP_TOL:
            raise DomainError(f"eigenvalue {w[0]:.3e} is negative")
        w = np.clip(w, 0.0, None)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(w), dtype=float)
    if not np.all(np.isfinite(fw)):
        bad = w[~np.isfinite(fw)][0]
        raise DomainError(f"function undefined at eigenvalue {bad!r}")
    return spec.reconstruct(fw)


def sqrtm_psd(a: Operand) -> np.ndarray:
    return spectral_fn(a, np.sqrt, nonneg=True)


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b``; dimensions multiply."""
    return np.kron(as_matrix(a, "A"), as_matrix(b, "B"))


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (g + g.conj().T) / 2
