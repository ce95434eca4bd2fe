"""Quantum Fisher information, skew information and their local minima.

All functions take a :class:`~qcorr.spectral.DensityMatrix` whose first
tensor factor is the measured qubit (subsystem A); subsystem B is whatever
is left, ``d = dim // 2``.

Fisher information uses the ``F = Tr(rho L^2) / 4`` normalization, so the
Fisher information of a pure state equals the variance of the generator and
both local quantifiers live in ``[0, 1]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidInput, NumericalError, ZeroFisher
from .spectral import PAULI, DensityMatrix, check_hermitian, eigh, make_density

PAIR_CUTOFF = 1e-14
AUDIT_EPS = 1e-10
IMAG_TOL = 1e-12
TIE_TOL = 1e-10


class Convention(enum.Enum):
    """Which eigenpairs enter the sum defining the Fisher correlation matrix.

    ``ALL_PAIRS`` includes ``i == j`` (weight ``p_i``) and is the only
    choice consistent with the spectral QFI; ``PAPER_OFF_DIAGONAL`` drops
    those terms and is kept only to reproduce closed forms derived that way.
    """

    ALL_PAIRS = "all-pairs"
    PAPER_OFF_DIAGONAL = "paper"

    @classmethod
    def parse(cls, value) -> "Convention":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            raise InvalidInput(f"unknown convention {value!r}; use 'all-pairs' or 'paper'") from None


@dataclass(frozen=True)
class BlochDirection:
    """Unit vector ``r`` defining the local observable ``r . sigma`` on qubit A."""

    r: tuple

    def __post_init__(self):
        v = np.asarray(self.r, dtype=float).reshape(-1)
        if v.shape != (3,) or not np.all(np.isfinite(v)):
            raise InvalidInput(f"Bloch direction needs 3 finite components, got {self.r!r}")
        norm = float(np.linalg.norm(v))
        if norm < 1e-300:
            raise InvalidInput("Bloch direction cannot be the zero vector")
        object.__setattr__(self, "r", tuple(float(x) for x in v / norm))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.r)

    def observable(self) -> np.ndarray:
        """The 2x2 operator ``r . sigma``."""
        return sum(c * s for c, s in zip(self.r, PAULI))

    def local_observable(self, dim_b: int) -> np.ndarray:
        """``(r . sigma) (x) I_B`` on the full ``2 * dim_b`` space."""
        return np.kron(self.observable(), np.eye(dim_b))


def _as_direction(direction) -> BlochDirection:
    return direction if isinstance(direction, BlochDirection) else BlochDirection(direction)


def _as_state(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else make_density(rho)


def _check_generator(rho: DensityMatrix, h) -> np.ndarray:
    h = check_hermitian(h, "H")
    if h.shape[0] != rho.dim:
        raise DimensionMismatch(f"generator dimension {h.shape[0]} != state dimension {rho.dim}")
    return h


def subsystem_b_dim(rho: DensityMatrix) -> int:
    if rho.dim % 2 or rho.dim < 2:
        raise DimensionMismatch(f"state dimension {rho.dim} is not 2 x d")
    return rho.dim // 2


def local_paulis(dim_b: int) -> np.ndarray:
    """Stack of ``sigma_l (x) I_B`` for ``l = x, y, z``; shape ``(3, 2d, 2d)``."""
    eye = np.eye(dim_b)
    return np.array([np.kron(s, eye) for s in PAULI])


def _local_elements(rho: DensityMatrix) -> np.ndarray:
    """``<psi_i| sigma_l (x) I |psi_j>`` for each l; shape ``(3, n, n)``."""
    v = rho.spectrum.eigenvectors
    ops = local_paulis(subsystem_b_dim(rho))
    return v.conj().T[None] @ ops @ v[None]


def _pair_sums(p: np.ndarray):
    s = p[:, None] + p[None, :]
    keep = s > PAIR_CUTOFF
    return s, keep


def qfi(rho, h) -> float:
    """Fisher information of ``rho`` for the phase generated by ``h``.

    ``F = 1/2 sum_{i != j, p_i + p_j > 1e-14} (p_i - p_j)^2 / (p_i + p_j) |<psi_i|h|psi_j>|^2``
    """
    rho = _as_state(rho)
    h = _check_generator(rho, h)
    p = rho.spectrum.eigenvalues
    hij = rho.spectrum.in_basis(h)
    s, keep = _pair_sums(p)
    w = np.where(keep, (p[:, None] - p[None, :]) ** 2 / np.where(keep, s, 1.0), 0.0)
    return max(0.0, 0.5 * float(np.sum(w * np.abs(hij) ** 2)))


def qfi_root_form(rho, h) -> float:
    """The same Fisher information written through square roots of the populations.

    ``1/2 sum_{i,j} (1 + 2 sqrt(p_i p_j) / (p_i + p_j)) (sqrt p_i - sqrt p_j)^2 |h_ij|^2``.
    Algebraically identical to :func:`qfi`; kept as a cross-check.
    """
    rho = _as_state(rho)
    h = _check_generator(rho, h)
    p = rho.spectrum.eigenvalues
    hij = rho.spectrum.in_basis(h)
    s, keep = _pair_sums(p)
    r = np.sqrt(p)
    factor = np.where(keep, 1.0 + 2.0 * np.outer(r, r) / np.where(keep, s, 1.0), 0.0)
    return max(0.0, 0.5 * float(np.sum(factor * (r[:, None] - r[None, :]) ** 2 * np.abs(hij) ** 2)))


def qfi_local(rho, direction) -> float:
    """Fisher information for the local generator ``(r . sigma) (x) I_B``."""
    rho = _as_state(rho)
    d = _as_direction(direction)
    return qfi(rho, d.local_observable(subsystem_b_dim(rho)))


def _correlation_matrix(elems: np.ndarray, weights: np.ndarray, what: str) -> np.ndarray:
    # m[l, k] = sum_ij w_ij <i|s_l|j> <j|s_k|i>
    raw = np.einsum("ij,lij,kji->lk", weights, elems, elems)
    if np.max(np.abs(raw.imag)) > IMAG_TOL:
        raise NumericalError(f"matrix {what} has imaginary residue {np.max(np.abs(raw.imag)):.3e}")
    m = raw.real
    return (m + m.T) / 2


def matrix_m(rho, convention=Convention.ALL_PAIRS) -> np.ndarray:
    """3x3 Fisher correlation matrix, so that ``F(rho, r) = 1 - r^T M r``.

    Under :attr:`Convention.ALL_PAIRS` (default) the identity holds exactly;
    :attr:`Convention.PAPER_OFF_DIAGONAL` drops the diagonal ``i == j`` terms.
    """
    rho = _as_state(rho)
    convention = Convention.parse(convention)
    elems = _local_elements(rho)
    p = rho.spectrum.eigenvalues
    s, keep = _pair_sums(p)
    w = np.where(keep, 2.0 * np.outer(p, p) / np.where(keep, s, 1.0), 0.0)
    if convention is Convention.PAPER_OFF_DIAGONAL:
        np.fill_diagonal(w, 0.0)
    return _correlation_matrix(elems, w, "M")


def matrix_w(rho) -> np.ndarray:
    """3x3 matrix ``w_ij = Tr(sqrt(rho) s_i sqrt(rho) s_j)`` with ``s_i = sigma_i (x) I``."""
    rho = _as_state(rho)
    elems = _local_elements(rho)
    r = np.sqrt(rho.spectrum.eigenvalues)
    return _correlation_matrix(elems, np.outer(r, r), "W")


def top_eigenpair(m: np.ndarray) -> tuple[float, BlochDirection]:
    """Largest eigenvalue of a real symmetric 3x3 matrix and a unit eigenvector.

    Within a (numerically) degenerate top eigenspace the solver's basis
    vector with the lexicographically largest ``(|r1|, |r2|, |r3|)`` wins;
    the sign is fixed so the first non-zero component is positive.
    """
    spec = eigh(m)
    lam = spec.eigenvalues
    vecs = spec.eigenvectors.real
    top = lam[-1]
    candidates = [vecs[:, i] for i in range(len(lam)) if lam[i] >= top - TIE_TOL]
    best = max(candidates, key=lambda v: tuple(np.round(np.abs(v), 12)))
    nz = best[np.abs(best) > 1e-12]
    if nz.size and nz[0] < 0:
        best = -best
    return float(top), BlochDirection(best)


def _from_matrix(m: np.ndarray) -> tuple[float, BlochDirection]:
    lam, direction = top_eigenpair(m)
    return min(1.0, max(0.0, 1.0 - lam)), direction


def lqfi(rho, convention=Convention.ALL_PAIRS) -> tuple[float, BlochDirection]:
    """Local quantum Fisher information ``1 - lambda_max(M)`` and its optimal direction."""
    return _from_matrix(matrix_m(rho, convention))


def skew_information(rho, h) -> float:
    """Wigner-Yanase skew information ``1/2 sum_ij (sqrt p_i - sqrt p_j)^2 |h_ij|^2``."""
    rho = _as_state(rho)
    h = _check_generator(rho, h)
    r = np.sqrt(rho.spectrum.eigenvalues)
    hij = rho.spectrum.in_basis(h)
    return max(0.0, 0.5 * float(np.sum((r[:, None] - r[None, :]) ** 2 * np.abs(hij) ** 2)))


def lqu(rho) -> tuple[float, BlochDirection]:
    """Local quantum uncertainty ``1 - xi_max(W)`` and its optimal direction."""
    return _from_matrix(matrix_w(rho))


@dataclass(frozen=True)
class InequalityAudit:
    skew: float
    qfi: float
    lqu: float
    lqfi: float
    chain_ok: bool


def chain_holds(skew, fisher, u, q, eps=AUDIT_EPS) -> bool:
    return bool(
        skew - eps <= fisher <= 2 * skew + eps
        and u - eps <= q <= 2 * u + eps
        and u <= fisher + eps
    )


def audit_inequalities(rho, generator) -> InequalityAudit:
    """Check ``I <= F <= 2I``, ``U <= Q <= 2U`` and ``U <= F`` at tolerance 1e-10.

    ``generator`` is either a Bloch direction (3 components) or a full
    Hermitian matrix of the form ``(r . sigma) (x) I_B``.
    """
    rho = _as_state(rho)
    g = np.asarray(generator.r if isinstance(generator, BlochDirection) else generator)
    if g.shape == (3,):
        h = BlochDirection(g).local_observable(subsystem_b_dim(rho))
    else:
        h = _check_generator(rho, g)
    i_val = skew_information(rho, h)
    f_val = qfi(rho, h)
    u_val, _ = lqu(rho)
    q_val, _ = lqfi(rho)
    return InequalityAudit(i_val, f_val, u_val, q_val, chain_holds(i_val, f_val, u_val, q_val))


def cramer_rao_bound(fisher_value: float, repetitions: int = 1) -> float:
    """Lower bound ``1 / (n F)`` on the variance of an unbiased phase estimator."""
    if isinstance(repetitions, bool) or int(repetitions) != repetitions or repetitions < 1:
        raise InvalidInput(f"repetitions must be a positive integer, got {repetitions!r}")
    if not fisher_value > 0:
        raise ZeroFisher(f"Fisher information {fisher_value!r} is not positive")
    return 1.0 / (int(repetitions) * float(fisher_value))


@dataclass(frozen=True)
class CorrelationReport:
    """Both local quantifiers of one state with their matrices and optimal directions."""

    lqfi: float
    lqu: float
    lambda_max_m: float
    xi_max_w: float
    matrix_m: np.ndarray = field(repr=False)
    matrix_w: np.ndarray = field(repr=False)
    optimal_dir_lqfi: BlochDirection
    optimal_dir_lqu: BlochDirection
    convention: Convention = Convention.ALL_PAIRS

    @property
    def inequality_ok(self) -> bool:
        return bool(self.lqu - AUDIT_EPS <= self.lqfi <= 2 * self.lqu + AUDIT_EPS)

    def as_dict(self) -> dict:
        return {
            "lqfi": self.lqfi,
            "lqu": self.lqu,
            "lambda_max_m": self.lambda_max_m,
            "xi_max_w": self.xi_max_w,
            "matrix_m": self.matrix_m.tolist(),
            "matrix_w": self.matrix_w.tolist(),
            "optimal_dir_lqfi": list(self.optimal_dir_lqfi.r),
            "optimal_dir_lqu": list(self.optimal_dir_lqu.r),
            "inequality_ok": self.inequality_ok,
            "convention": self.convention.value,
        }


def correlation_report(rho, convention=Convention.ALL_PAIRS) -> CorrelationReport:
    rho = _as_state(rho)
    convention = Convention.parse(convention)
    m = matrix_m(rho, convention)
    w = matrix_w(rho)
    lam, dir_q = top_eigenpair(m)
    xi, dir_u = top_eigenpair(w)
    return CorrelationReport(
        lqfi=min(1.0, max(0.0, 1.0 - lam)),
        lqu=min(1.0, max(0.0, 1.0 - xi)),
        lambda_max_m=lam,
        xi_max_w=xi,
        matrix_m=m,
        matrix_w=w,
        optimal_dir_lqfi=dir_q,
        optimal_dir_lqu=dir_u,
        convention=convention,
    )
