"""Acceptance suite: one marked group of tests per criterion.

Grids are evaluated once per module. Run with ``pytest tests/test_acceptance.py``;
the terminal summary prints a PASS/FAIL line per criterion.
"""

import io

import numpy as np
import pytest

from qcorr.models import (
    AnisotropicXYParams,
    paper_lqfi_anisotropic,
    paper_lqu_anisotropic,
    xy_anisotropic_state,
)
from qcorr.oracle import SphereGrid, min_over_sphere, sld_qfi
from qcorr.quantifiers import audit_inequalities, lqfi, lqu, qfi, skew_information
from qcorr.spectral import make_density, random_hermitian
from qcorr.states import bell_state, classical_quantum_state, random_density, random_direction, random_unitary
from qcorr.sweep import Axis, Model, SweepSpec, evaluate_point, locate_kink, run_audit

GAMMAS = np.linspace(-1, 1, 21)
FIELDS = np.linspace(0, 3, 61)
TEMPS = np.linspace(0.05, 5, 100)
criterion = pytest.mark.criterion


def _grid(model, axis):
    q = np.empty((len(axis), len(TEMPS)))
    u, qp, up = np.empty_like(q), np.empty_like(q), np.empty_like(q)
    for i, a in enumerate(axis):
        for j, t in enumerate(TEMPS):
            pt = evaluate_point(model, float(a), float(t))
            q[i, j], u[i, j] = pt.report.lqfi, pt.report.lqu
            qp[i, j], up[i, j] = pt.lqfi_paper, pt.lqu_paper
    return {"q": q, "u": u, "q_paper": qp, "u_paper": up}


@pytest.fixture(scope="module")
def aniso():
    return _grid(Model.ANISOTROPIC_XY, GAMMAS)


@pytest.fixture(scope="module")
def field():
    return _grid(Model.ISOTROPIC_XY_FIELD, FIELDS)


def _states(n, seed):
    rng = np.random.default_rng(seed)
    return [random_density(4 if k % 2 == 0 else 6, rng) for k in range(n)]


@pytest.fixture(scope="module")
def corpus500():
    return _states(500, 1)


@criterion(1, "anisotropic closed forms agree with the general engine")
def test_anisotropic_closed_form_agreement(aniso):
    gap_q = np.max(np.abs(aniso["q"] - aniso["q_paper"]))
    gap_u = np.max(np.abs(aniso["u"] - aniso["u_paper"]))
    print(f"max |lqfi - printed| = {gap_q:.3e}, max |lqu - printed| = {gap_u:.3e}")
    assert gap_q <= 1e-9
    assert gap_u <= 1e-9


@criterion(2, "Ising limit: correlations vanish at gamma = +-1")
def test_ising_limit():
    for g in (1.0, -1.0):
        for t in (0.05, 0.5, 5.0):
            p = AnisotropicXYParams(g, t)
            rho = xy_anisotropic_state(p)
            values = [lqfi(rho)[0], lqu(rho)[0], paper_lqfi_anisotropic(p), paper_lqu_anisotropic(p)]
            assert max(abs(v) for v in values) <= 1e-9, (g, t, values)


@criterion(3, "isotropic XX point maximizes the correlations")
def test_isotropic_maximum(aniso):
    i0 = int(np.argmin(np.abs(GAMMAS)))
    j = int(np.argmin(np.abs(TEMPS - 0.05)))
    assert aniso["q"][i0, j] >= 0.999
    assert aniso["u"][i0, j] >= 0.99
    for j, t in enumerate(TEMPS):
        if t <= 1:
            assert aniso["q"][i0, j] >= aniso["q"][:, j].max(), t


@criterion(4, "correlations are non-increasing in temperature")
def test_temperature_monotonicity(aniso):
    for key in ("q", "u"):
        worst = np.max(np.diff(aniso[key], axis=1))
        assert worst <= 1e-10, (key, worst)


def _sandwich_violations(q, u, eps=1e-10):
    return int(np.sum((u - eps > q) | (q > 2 * u + eps)))


@criterion(5, "U <= Q <= 2U and I <= F <= 2I")
def test_sandwich_on_model_grids(aniso, field):
    assert _sandwich_violations(aniso["q"], aniso["u"]) == 0
    assert _sandwich_violations(field["q"], field["u"]) == 0


@criterion(5, "U <= Q <= 2U and I <= F <= 2I")
def test_sandwich_on_random_states(corpus500):
    q = np.array([lqfi(rho)[0] for rho in corpus500])
    u = np.array([lqu(rho)[0] for rho in corpus500])
    assert _sandwich_violations(q, u) == 0


@criterion(5, "U <= Q <= 2U and I <= F <= 2I")
def test_skew_fisher_sandwich(corpus500):
    rng = np.random.default_rng(2)
    violations = 0
    for rho in corpus500:
        for _ in range(50):
            a = audit_inequalities(rho, random_direction(rng))
            violations += not a.chain_ok
    assert violations == 0


def _dominance_failures(grid):
    q, u = grid["q"], grid["u"]
    mask = q > 1e-9
    return int(np.sum(mask & (q - u < 1e-12))), float(np.min(np.where(mask, q - u, np.inf)))


@criterion(6, "LQFI strictly exceeds LQU wherever it is nonzero")
def test_dominance_anisotropic(aniso):
    failures, margin = _dominance_failures(aniso)
    print(f"anisotropic: {failures} points with Q - U < 1e-12, smallest margin {margin:.3e}")
    assert failures == 0


@criterion(6, "LQFI strictly exceeds LQU wherever it is nonzero")
def test_dominance_field(field):
    # Nearly pure, nearly product low-temperature states make Q - U ~ Q exp(-J / T),
    # which drops below 1e-12 at T = 0.05, B >= 1.45 and T = 0.1, B >= 2.85.
    failures, margin = _dominance_failures(field)
    print(f"field: {failures} points with Q - U < 1e-12, smallest margin {margin:.3e}")
    assert failures == 0


@pytest.fixture(scope="module")
def corpus200():
    return _states(200, 3)


@criterion(7, "eigen solutions match brute-force oracles")
def test_sphere_oracle(corpus200):
    grid = SphereGrid()
    worst = 0.0
    for rho in corpus200:
        worst = max(worst,
                    abs(min_over_sphere(rho, "qfi", grid)[0] - lqfi(rho)[0]),
                    abs(min_over_sphere(rho, "skew", grid)[0] - lqu(rho)[0]))
    print(f"worst sphere-search gap {worst:.3e}")
    assert worst <= 1e-6


@criterion(7, "eigen solutions match brute-force oracles")
def test_sld_oracle():
    rng = np.random.default_rng(4)
    worst = 0.0
    for k in range(200):
        dim = 4 if k % 2 == 0 else 6
        rho, h = random_density(dim, rng), random_hermitian(dim, rng)
        worst = max(worst, abs(sld_qfi(rho, h).qfi - qfi(rho, h)))
    print(f"worst SLD gap {worst:.3e}")
    assert worst <= 1e-9


@criterion(8, "sudden change of LQFI at B = J")
def test_sudden_change(field):
    j = int(np.argmin(np.abs(TEMPS - 0.05)))
    kink = locate_kink(FIELDS, field["q"][:, j])
    step = FIELDS[1] - FIELDS[0]
    print(f"kink at B = {kink}")
    assert abs(kink - 1.0) <= step + 1e-12


@criterion(9, "zero-discord nullity, Bell maxima, local-unitary invariance")
def test_classical_quantum_nullity():
    rng = np.random.default_rng(5)
    for k in range(50):
        rho = classical_quantum_state(2 if k % 2 == 0 else 3, rng)
        assert lqfi(rho)[0] <= 1e-9
        assert lqu(rho)[0] <= 1e-9


@criterion(9, "zero-discord nullity, Bell maxima, local-unitary invariance")
def test_bell_states():
    for name in ("psi-", "psi+", "phi-", "phi+"):
        rho = bell_state(name)
        assert abs(lqfi(rho)[0] - 1) <= 1e-10
        assert abs(lqu(rho)[0] - 1) <= 1e-10


@criterion(9, "zero-discord nullity, Bell maxima, local-unitary invariance")
def test_local_unitary_invariance():
    rng = np.random.default_rng(6)
    for k in range(100):
        dim_b = 2 if k % 2 == 0 else 3
        rho = random_density(2 * dim_b, rng)
        u = np.kron(random_unitary(2, rng), random_unitary(dim_b, rng))
        moved = make_density(u @ rho.matrix @ u.conj().T)
        assert abs(lqfi(moved)[0] - lqfi(rho)[0]) <= 1e-9
        assert abs(lqu(moved)[0] - lqu(rho)[0]) <= 1e-9


def _audit_text(spec):
    buf = io.StringIO()
    report = run_audit(spec, buf)
    return report, buf.getvalue()


@criterion(10, "divergence ledger for the printed field-model forms")
def test_field_divergence_report():
    spec = SweepSpec("iso-xy-field", Axis("field", 1.5, 5, 71), Axis("temperature", 0.05, 0.2, 4))
    report, text = _audit_text(spec)
    assert _audit_text(spec)[1] == text
    assert report.summary["gap_points_lqfi"] == len(report.rows)
    assert report.summary["gap_points_lqu"] == len(report.rows)
    for t in spec.temperature.values():
        rows = [r for r in report.rows if r.temperature == t]
        for attr in ("paper_numeric_gap_lqfi", "paper_numeric_gap_lqu"):
            gaps = np.array([getattr(r, attr) for r in rows])
            assert np.all(gaps > 0), (t, attr)
            assert np.all(np.diff(gaps) >= 0), (t, attr)


@criterion(10, "divergence ledger for the printed field-model forms")
def test_anisotropic_report_has_no_gap():
    spec = SweepSpec("aniso-xy", Axis("gamma", -1, 1, 21), Axis("temperature", 0.05, 5, 100))
    report, text = _audit_text(spec)
    assert _audit_text(spec)[1] == text
    assert report.summary["max_gap_lqfi"] <= 1e-9
    assert report.summary["max_gap_lqu"] <= 1e-9
    assert report.summary["chain_violations"] == 0
