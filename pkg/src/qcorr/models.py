"""Two-qubit Heisenberg XY thermal states and their closed-form quantifiers.

Thermal states are built from the spectrum of the Hamiltonian: the Gibbs
populations are a softmax of ``-beta * E`` evaluated in log space, so tiny
populations at low temperature keep full relative precision (building
``exp(-beta H)`` entrywise and re-diagonalizing would lose them).

The ``paper_*`` functions evaluate the published closed-form expressions
as printed (with a common exponential scale factored out of every
hyperbolic function to avoid overflow; the ratios are unchanged). They are
an independent path, and for the field model they are not always right:
:func:`qcorr.sweep.run_audit` reports the gap against the general engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import InvalidInput, InvalidSpec, SizeTooLarge
from .spectral import (
    PAULI,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    DensityMatrix,
    check_hermitian,
    eigh,
)

MAX_CHAIN_SITES = 8


def _check_temperature(t):
    if not (np.isfinite(t) and t > 0):
        raise InvalidSpec("temperature", f"must be a finite positive number, got {t!r}")


@dataclass(frozen=True)
class AnisotropicXYParams:
    """Anisotropic XY pair with coupling fixed to ``J = 1``."""

    gamma: float
    temperature: float

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and abs(self.gamma) <= 1):
            raise InvalidSpec("gamma", f"must lie in [-1, 1], got {self.gamma!r}")
        _check_temperature(self.temperature)

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature


@dataclass(frozen=True)
class IsotropicFieldParams:
    """Isotropic XY pair with coupling ``J`` in a field ``B`` along z."""

    field: float
    temperature: float
    coupling: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.field):
            raise InvalidSpec("field", f"must be finite, got {self.field!r}")
        if not np.isfinite(self.coupling):
            raise InvalidSpec("coupling", f"must be finite, got {self.coupling!r}")
        _check_temperature(self.temperature)

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature


@dataclass(frozen=True)
class ChainParams:
    n_sites: int
    jx: float = 0.0
    jy: float = 0.0
    jz: float = 0.0
    periodic: bool = True

    def __post_init__(self):
        if self.n_sites > MAX_CHAIN_SITES:
            raise SizeTooLarge(f"chains are limited to {MAX_CHAIN_SITES} sites, got {self.n_sites}")
        if self.n_sites < 2:
            raise InvalidSpec("n_sites", f"need at least 2 sites, got {self.n_sites}")


def _site_operator(op, site, n):
    factors = [np.eye(2)] * n
    factors[site] = op
    return reduce(np.kron, factors)


def chain_hamiltonian(p: ChainParams) -> np.ndarray:
    """``1/4 sum_i (Jx sx_i sx_{i+1} + Jy sy_i sy_{i+1} + Jz sz_i sz_{i+1})``.

    With ``periodic=True`` site ``N + 1`` is site 1. For ``N = 2`` this
    counts the single bond twice, so the periodic two-site operator is twice
    the open one; the two-qubit model builders below use the open form.
    """
    n = p.n_sites
    h = np.zeros((2**n, 2**n), dtype=complex)
    bonds = range(n) if p.periodic else range(n - 1)
    for i in bonds:
        j = (i + 1) % n
        for coupling, s in zip((p.jx, p.jy, p.jz), PAULI):
            if coupling:
                h += 0.25 * coupling * (_site_operator(s, i, n) @ _site_operator(s, j, n))
    return h


def anisotropic_hamiltonian(gamma: float, coupling: float = 1.0) -> np.ndarray:
    """``J (s+ s- + s- s+) + J gamma (s+ s+ + s- s-)`` on two qubits."""
    hop = np.kron(SIGMA_PLUS, SIGMA_MINUS) + np.kron(SIGMA_MINUS, SIGMA_PLUS)
    pair = np.kron(SIGMA_PLUS, SIGMA_PLUS) + np.kron(SIGMA_MINUS, SIGMA_MINUS)
    return coupling * hop + coupling * gamma * pair


def isotropic_field_hamiltonian(coupling: float, field: float) -> np.ndarray:
    """``J (s+ s- + s- s+) + B/2 (sz_1 + sz_2)`` on two qubits."""
    hop = np.kron(SIGMA_PLUS, SIGMA_MINUS) + np.kron(SIGMA_MINUS, SIGMA_PLUS)
    zeeman = np.kron(SIGMA_Z, np.eye(2)) + np.kron(np.eye(2), SIGMA_Z)
    return coupling * hop + 0.5 * field * zeeman


def gibbs_state(h, beta: float) -> DensityMatrix:
    """``exp(-beta H) / Tr exp(-beta H)`` assembled from the spectrum of ``H``."""
    spec = eigh(check_hermitian(h, "H"))
    x = -beta * spec.eigenvalues
    x = x - np.max(x)
    return DensityMatrix.from_spectrum(np.exp(x), spec.eigenvectors)


_R = 1 / np.sqrt(2)
# columns: |Psi->, |Psi+>, |Phi->, |Phi+>
BELL_BASIS = np.array([[0, 0, _R, _R], [_R, _R, 0, 0], [-_R, _R, 0, 0], [0, 0, -_R, _R]])
# columns: |00>, |Psi->, |Psi+>, |11>
FIELD_BASIS = np.array([[1, 0, 0, 0], [0, _R, _R, 0], [0, -_R, _R, 0], [0, 0, 0, 1]])


def gibbs_state_in_basis(h, basis, beta: float) -> DensityMatrix:
    """Gibbs state of ``H`` given an orthonormal eigenbasis known in closed form.

    Degenerate levels then keep that basis instead of whatever mixture a
    numerical solver returns, which matters for basis-dependent conventions.
    """
    h = check_hermitian(h, "H")
    d = basis.conj().T @ h @ basis
    off = np.max(np.abs(d - np.diag(np.diag(d))))
    if off > 1e-12 * max(1.0, np.max(np.abs(h))):
        raise InvalidInput(f"basis does not diagonalize H (off-diagonal {off:.3e})")
    x = -beta * np.diag(d).real
    return DensityMatrix.from_spectrum(np.exp(x - np.max(x)), basis)


def xy_anisotropic_state(p: AnisotropicXYParams) -> DensityMatrix:
    """Thermal state with the Bell states as eigenvectors (energies -1, 1, -gamma, gamma)."""
    return gibbs_state_in_basis(anisotropic_hamiltonian(p.gamma), BELL_BASIS, p.beta)


def xy_isotropic_field_state(p: IsotropicFieldParams) -> DensityMatrix:
    """Thermal state with eigenvectors ``|00>, |Psi->, |Psi+>, |11>`` (energies B, -J, J, -B)."""
    return gibbs_state_in_basis(isotropic_field_hamiltonian(p.coupling, p.field), FIELD_BASIS, p.beta)


def anisotropic_state_entries(p: AnisotropicXYParams) -> np.ndarray:
    """The printed cosh/sinh matrix over ``Z = 2 (cosh b + cosh g b)``, entry by entry."""
    b, g = p.beta, p.gamma
    z = 2 * (np.cosh(b) + np.cosh(g * b))
    m = np.zeros((4, 4))
    m[0, 0] = m[3, 3] = np.cosh(g * b)
    m[1, 1] = m[2, 2] = np.cosh(b)
    m[0, 3] = m[3, 0] = -np.sinh(g * b)
    m[1, 2] = m[2, 1] = -np.sinh(b)
    return m / z


def isotropic_field_state_entries(p: IsotropicFieldParams) -> np.ndarray:
    """The printed field-model matrix, normalized by its true trace ``2 (cosh Bb + cosh Jb)``."""
    b, bf, j = p.beta, p.field, p.coupling
    z = 2 * (np.cosh(bf * b) + np.cosh(j * b))
    m = np.zeros((4, 4))
    m[0, 0] = np.exp(-bf * b)
    m[3, 3] = np.exp(bf * b)
    m[1, 1] = m[2, 2] = np.cosh(j * b)
    m[1, 2] = m[2, 1] = -np.sinh(j * b)
    return m / z


# -- printed closed forms ---------------------------------------------------

def _ch(x, s):
    """``cosh(x) * exp(-s)`` for ``s >= |x|``, without overflow."""
    return 0.5 * (np.exp(abs(x) - s) + np.exp(-abs(x) - s))


def _sh(x, s):
    """``sinh(x) * exp(-s)`` for ``s >= |x|``."""
    return 0.5 * np.sign(x) * (np.exp(abs(x) - s) - np.exp(-abs(x) - s))


def _sech2(x):
    e = np.exp(-2 * abs(x))
    return 4 * e / (1 + e) ** 2


def _sech(x):
    e = np.exp(-abs(x))
    return 2 * e / (1 + e * e)


def paper_anisotropic_entries(p: AnisotropicXYParams) -> dict:
    """Printed diagonal entries of M and W for the anisotropic model."""
    b, g = p.beta, p.gamma
    s = b * max(1.0, abs(g))
    cb, cg, sb, sg, one = _ch(b, s), _ch(g * b, s), _sh(b, s), _sh(g * b, s), np.exp(-s)
    root = np.sqrt((cb + one) * (cg + one))
    return {
        "m11": _sech2((1 - g) * b / 2),
        "m22": _sech2((1 + g) * b / 2),
        "m33": _sech(b) * _sech(g * b),
        "w11": ((cb + one) * (cg + one) + sg * sb) / ((cg + cb) * root),
        "w22": ((cb + one) * (cg + one) - sg * sb) / ((cg + cb) * root),
        "w33": 2 * one / (cg + cb),
    }


def paper_lqfi_anisotropic(p: AnisotropicXYParams) -> float:
    e = paper_anisotropic_entries(p)
    return float(1 - (e["m11"] if p.gamma >= 0 else e["m22"]))


def paper_lqu_anisotropic(p: AnisotropicXYParams) -> float:
    e = paper_anisotropic_entries(p)
    return float(min(1.0, max(0.0, 1 - (e["w11"] if p.gamma >= 0 else e["w22"]))))


def paper_isotropic_field_entries(p: IsotropicFieldParams) -> dict:
    """Printed M and W diagonal entries for the field model.

    ``m33`` and ``w33`` are reproduced for completeness only; they do not
    match a direct evaluation and are never used to pick the maximum.
    """
    b = p.beta
    x, y = p.field * b, p.coupling * b
    s = max(abs(x), abs(y))
    cb, cj, one = _ch(x, s), _ch(y, s), np.exp(-s)
    total = cb + cj
    return {
        "m11": 2 * (one * one + cb * cj) / total**2,
        "m33": _sech(y) * one / (4 * total),
        "w11": np.sqrt((cb + one) * (cj + one)) / total,
        "w33": 2 * one / total,
    }


def paper_lqfi_isotropic_field(p: IsotropicFieldParams) -> float:
    return float(1 - paper_isotropic_field_entries(p)["m11"])


def paper_lqu_isotropic_field(p: IsotropicFieldParams) -> float:
    return float(1 - paper_isotropic_field_entries(p)["w11"])
