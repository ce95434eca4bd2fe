"""Named states and random samplers for bipartite ``2 x d`` systems."""

from __future__ import annotations

import numpy as np

from .errors import InvalidInput
from .spectral import DensityMatrix, make_density

_S = 1 / np.sqrt(2)
BELL_KETS = {
    "phi+": np.array([_S, 0, 0, _S]),
    "phi-": np.array([_S, 0, 0, -_S]),
    "psi+": np.array([0, _S, _S, 0]),
    "psi-": np.array([0, _S, -_S, 0]),
}


def pure_state(ket) -> DensityMatrix:
    k = np.asarray(ket, dtype=complex).reshape(-1)
    norm = np.linalg.norm(k)
    if norm == 0:
        raise InvalidInput("ket must be non-zero")
    k = k / norm
    return make_density(np.outer(k, k.conj()))


def bell_state(name: str = "psi-") -> DensityMatrix:
    """One of ``phi+``, ``phi-``, ``psi+``, ``psi-`` as a density matrix."""
    try:
        return pure_state(BELL_KETS[name])
    except KeyError:
        raise InvalidInput(f"unknown Bell state {name!r}; choose from {sorted(BELL_KETS)}") from None


def basis_state(bits: str) -> DensityMatrix:
    """Computational basis product state such as ``"00"``."""
    ket = np.zeros(2 ** len(bits))
    ket[int(bits, 2)] = 1.0
    return pure_state(ket)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random mixed state obtained by tracing out a Gaussian purification.

    ``rank`` is the environment dimension (default ``dim``, i.e. full rank
    with probability one).
    """
    k = dim if rank is None else rank
    g = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    return make_density(g @ g.conj().T)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_direction(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def classical_quantum_state(dim_b: int, rng: np.random.Generator) -> DensityMatrix:
    """``sum_k q_k |k><k| (x) rho_k`` with ``{|k>}`` a random orthonormal qubit basis."""
    u = random_unitary(2, rng)
    q = rng.dirichlet([1.0, 1.0])
    out = np.zeros((2 * dim_b, 2 * dim_b), dtype=complex)
    for k in range(2):
        ket = u[:, k]
        rho_b = random_density(dim_b, rng).matrix
        out += q[k] * np.kron(np.outer(ket, ket.conj()), rho_b)
    return make_density(out)
