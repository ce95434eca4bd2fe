"""Brute-force reference computations used to check the fast paths.

None of these go through the 3x3 correlation matrices: the local minima
are found by exhaustive search over the Bloch sphere, the Fisher
information by explicitly solving for the symmetric logarithmic
derivative, and the skew information from the commutator with sqrt(rho).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConvergenceFailure, InvalidInput, RankDeficient
from .quantifiers import BlochDirection, _as_state, _check_generator, local_paulis, subsystem_b_dim
from .spectral import DensityMatrix, eigh, sqrtm_psd

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))
FULL_RANK_MIN = 1e-10
SLD_RESIDUAL_TOL = 1e-8
FD_TOL = 1e-6


@dataclass(frozen=True)
class SphereGrid:
    """Fibonacci lattice followed by shrinking spherical-cap refinements."""

    n_points: int = 2000
    refine_iterations: int = 3
    refine_shrink: float = 0.2
    refine_points: Optional[int] = None

    def __post_init__(self):
        if self.n_points < 32:
            raise InvalidInput(f"n_points must be >= 32, got {self.n_points}")
        if self.refine_iterations < 0:
            raise InvalidInput("refine_iterations must be non-negative")
        if not 0 < self.refine_shrink < 1:
            raise InvalidInput(f"refine_shrink must lie in (0, 1), got {self.refine_shrink}")


def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` nearly uniform unit vectors, shape ``(n, 3)``."""
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    rho = np.sqrt(1.0 - z * z)
    phi = i * GOLDEN_ANGLE
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def spherical_cap(axis: np.ndarray, radius: float, n: int) -> np.ndarray:
    """Fibonacci points on the cap of angular ``radius`` around ``axis`` (axis included)."""
    axis = axis / np.linalg.norm(axis)
    helper = np.eye(3)[np.argmin(np.abs(axis))]
    e1 = np.cross(axis, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    i = np.arange(n)
    cos_t = 1.0 - (1.0 - np.cos(radius)) * (i + 0.5) / n
    sin_t = np.sqrt(np.clip(1.0 - cos_t**2, 0.0, None))
    phi = i * GOLDEN_ANGLE
    pts = (cos_t[:, None] * axis + sin_t[:, None] * (np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2))
    return np.vstack([axis, pts])


def _qfi_batch(rho: DensityMatrix):
    p = rho.spectrum.eigenvalues
    v = rho.spectrum.eigenvectors
    ops = v.conj().T[None] @ local_paulis(subsystem_b_dim(rho)) @ v[None]
    s = p[:, None] + p[None, :]
    keep = s > 1e-14
    w = np.where(keep, (p[:, None] - p[None, :]) ** 2 / np.where(keep, s, 1.0), 0.0)

    def evaluate(dirs):
        h = np.einsum("kl,lij->kij", dirs, ops)
        return 0.5 * np.einsum("ij,kij->k", w, np.abs(h) ** 2)

    return evaluate


def _skew_batch(rho: DensityMatrix):
    root = sqrtm_psd(rho)
    ops = local_paulis(subsystem_b_dim(rho))

    def evaluate(dirs):
        h = np.einsum("kl,lij->kij", dirs, ops)
        c = root[None] @ h - h @ root[None]
        # -1/2 Tr(C^2) = 1/2 ||C||_F^2 for anti-Hermitian C
        return 0.5 * np.sum(np.abs(c) ** 2, axis=(1, 2))

    return evaluate


FUNCTIONALS = {"qfi": _qfi_batch, "skew": _skew_batch}


def min_over_sphere(rho, functional: str = "qfi", grid: SphereGrid = SphereGrid()):
    """Minimize a local functional over all Bloch directions by direct search.

    Parameters
    ----------
    rho : DensityMatrix or array_like
        A ``2 x d`` state.
    functional : {"qfi", "skew"}
        Fisher information or skew information of ``(r . sigma) (x) I``.
    grid : SphereGrid
        Search budget.

    Returns
    -------
    (float, BlochDirection)
    """
    rho = _as_state(rho)
    try:
        evaluate = FUNCTIONALS[functional](rho)
    except KeyError:
        raise InvalidInput(f"functional must be one of {sorted(FUNCTIONALS)}, got {functional!r}") from None
    dirs = fibonacci_sphere(grid.n_points)
    vals = evaluate(dirs)
    k = int(np.argmin(vals))
    best_val, best_dir = float(vals[k]), dirs[k]
    radius = 2.0 * np.sqrt(4.0 * np.pi / grid.n_points)
    n_cap = grid.refine_points or max(32, grid.n_points // 4)
    for _ in range(grid.refine_iterations):
        cap = spherical_cap(best_dir, radius, n_cap)
        vals = evaluate(cap)
        k = int(np.argmin(vals))
        if vals[k] <= best_val:
            best_val, best_dir = float(vals[k]), cap[k]
        radius *= grid.refine_shrink
    return max(0.0, best_val), BlochDirection(best_dir)


@dataclass(frozen=True)
class SLDResult:
    sld: np.ndarray
    qfi: float
    residual: float
    fd_error: Optional[float] = None


def perturb_full_rank(rho, eps: float = 1e-9) -> DensityMatrix:
    """``(1 - eps) rho + eps I / d``: the explicit fix for :class:`RankDeficient`."""
    rho = _as_state(rho)
    v = rho.spectrum.eigenvectors
    p = (1 - eps) * rho.spectrum.eigenvalues + eps / rho.dim
    return DensityMatrix.from_spectrum(p, v)


def rotated_state(rho, h, theta: float) -> np.ndarray:
    """``U^H rho U`` with ``U = exp(i H theta)``."""
    rho = _as_state(rho)
    spec = eigh(h)
    u = (spec.eigenvectors * np.exp(1j * spec.eigenvalues * theta)) @ spec.eigenvectors.conj().T
    return u.conj().T @ rho.matrix @ u


def sld_qfi(rho, h, dtheta: Optional[float] = None) -> SLDResult:
    """Fisher information ``Tr(rho L^2) / 4`` via the symmetric logarithmic derivative.

    The derivative of ``rho_theta`` at ``theta = 0`` is taken analytically,
    ``i [rho, H]``, and ``L`` solved in the eigenbasis as
    ``L_ij = 2 (d rho)_ij / (p_i + p_j)``. Passing ``dtheta`` additionally
    compares the analytic derivative with a central difference.
    """
    rho = _as_state(rho)
    h = _check_generator(rho, h)
    p = rho.spectrum.eigenvalues
    if p[0] < FULL_RANK_MIN:
        raise RankDeficient(f"smallest eigenvalue {p[0]:.3e} < {FULL_RANK_MIN}; perturb the state first")
    v = rho.spectrum.eigenvectors
    m = rho.matrix
    drho = 1j * (m @ h - h @ m)
    d_eig = v.conj().T @ drho @ v
    l_eig = 2.0 * d_eig / (p[:, None] + p[None, :])
    sld = v @ l_eig @ v.conj().T
    sld = (sld + sld.conj().T) / 2
    value = 0.25 * float(np.trace(m @ sld @ sld).real)
    residual = float(np.linalg.norm(drho - 0.5 * (sld @ m + m @ sld)))
    scale = float(np.linalg.norm(drho))
    if residual > SLD_RESIDUAL_TOL * max(scale, 1e-300) and residual > 1e-15:
        raise ConvergenceFailure(f"SLD residual {residual:.3e} exceeds {SLD_RESIDUAL_TOL} x {scale:.3e}")
    fd_error = None
    if dtheta is not None:
        fd = (rotated_state(rho, h, dtheta) - rotated_state(rho, h, -dtheta)) / (2 * dtheta)
        fd_error = float(np.max(np.abs(fd - drho)))
        if fd_error > FD_TOL:
            raise ConvergenceFailure(f"finite-difference derivative differs by {fd_error:.3e}")
    return SLDResult(sld, max(0.0, value), residual, fd_error)


def skew_commutator(rho, h) -> float:
    """``-1/2 Tr([sqrt(rho), H]^2)`` computed from the matrices directly."""
    rho = _as_state(rho)
    h = _check_generator(rho, h)
    root = sqrtm_psd(rho)
    c = root @ h - h @ root
    return max(0.0, float(-0.5 * np.trace(c @ c).real))
