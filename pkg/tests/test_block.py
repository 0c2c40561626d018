import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logblock import block as blk
from logblock import regularization as reg
from logblock.dynamics import DomainError
from logblock.integrator import IntegrationConfig

BLOCK = blk.make_block(0.0, 0.1)


def test_make_block_conditions():
    b = blk.make_block(0.0, 0.1)
    assert b.w_delta == pytest.approx(reg.w_from_energy(0.1, 0.0), abs=1e-15)
    with pytest.raises(blk.InvalidBlockError):
        blk.make_block(0.0, -0.1)
    with pytest.raises(blk.InvalidBlockError):
        blk.make_block(0.0, math.exp(-0.5))  # gradient condition fails
    with pytest.raises(blk.InvalidBlockError):
        blk.make_block(-1.0, 100.0)  # beyond r_Max
    for h in (-2.0, 0.0, 0.5, 3.0):
        d = blk.default_delta(h)
        assert blk.make_block(h).delta == d


def test_classify_boundary():
    C = blk.BoundaryClass
    assert blk.classify_boundary(0.0) is C.ASYMPTOTIC_IN
    assert blk.classify_boundary(2 * math.pi) is C.ASYMPTOTIC_IN
    assert blk.classify_boundary(math.pi) is C.ASYMPTOTIC_OUT
    assert blk.classify_boundary(0.5 * math.pi) is C.TANGENCY
    assert blk.classify_boundary(1.5 * math.pi) is C.TANGENCY
    assert blk.classify_boundary(0.3) is C.ENTRY
    assert blk.classify_boundary(-0.3) is C.ENTRY
    assert blk.classify_boundary(2.0) is C.EXIT


def test_block_map_quarter_turn():
    rec = blk.block_map(BLOCK, 0.25 * math.pi, 0.0)
    assert rec.status == "exited"
    assert abs(rec.phi_exit - 0.75 * math.pi) < 1e-6
    assert abs(rec.r_exit - 0.1) < 1e-12
    assert 0.0 < rec.G <= 2 * 0.1**2
    assert rec.psi_exit - rec.psi0 == pytest.approx(rec.G, abs=1e-9)


def test_block_map_asymptotic_and_tangency():
    a = blk.block_map(BLOCK, 0.0, 1.3)
    assert (a.status, a.phi_exit, a.psi_exit, a.G, a.tau_exit) == ("asymptotic", math.pi, 1.3, 0.0, math.inf)
    t = blk.block_map(BLOCK, 0.5 * math.pi, 0.4)
    assert t.tau_exit == 0.0 and t.boundary_class == "tangency" and t.phi_exit == 0.5 * math.pi


def test_block_map_rejects_exit_side():
    with pytest.raises(DomainError):
        blk.block_map(BLOCK, 2.0, 0.0)
    with pytest.raises(DomainError):
        blk.block_map(BLOCK, math.pi, 0.0)


def test_horizon_exceeded_status():
    rec = blk.block_map(BLOCK, 1e-6, 0.0, IntegrationConfig(max_span=1.0))
    assert rec.status == "horizon_exceeded"


@settings(max_examples=15, deadline=None)
@given(st.floats(1e-3, 0.5 * math.pi - 1e-3), st.floats(0, 2 * math.pi), st.booleans())
def test_exit_law_property(phi, psi, lower):
    phi0 = 2 * math.pi - phi if lower else phi
    rec = blk.block_map(BLOCK, phi0, psi)
    law, _ = blk.exit_law_errors(rec)
    assert law < 1e-6
    assert math.cos(rec.phi_exit) < 0.0
    assert abs(rec.G) <= 2 * 0.1**2


@pytest.mark.parametrize("phi0", [0.7, 1e-2, 1e-4])
def test_drift_against_phi_quadrature_oracle(phi0):
    rec = blk.block_map(BLOCK, phi0, 0.0)
    assert rec.G == pytest.approx(blk.drift_by_quadrature(BLOCK, math.log(math.sin(phi0))), abs=1e-9)


@pytest.mark.parametrize("phi0", [0.05, 0.9])
def test_drift_antisymmetry(phi0):
    g = blk.block_map(BLOCK, phi0, 0.0).G
    assert blk.block_map(BLOCK, 2 * math.pi - phi0, 0.0).G == pytest.approx(-g, abs=1e-9)
    assert blk.symmetric_partner_drift(BLOCK, blk.block_map(BLOCK, phi0, 0.0)) == pytest.approx(-g, abs=1e-9)


def test_g_scan_sorted_and_parallel_identical():
    phis = [0.3, 0.01, 0.1]
    serial = blk.g_scan(BLOCK, phis, jobs=1)
    parallel = blk.g_scan(BLOCK, phis, jobs=2)
    assert [r.phi0 for r in serial] == sorted(phis)
    assert serial == parallel


def test_g_scan_rejects_non_entry():
    with pytest.raises(DomainError):
        blk.g_scan(BLOCK, [0.1, 0.5 * math.pi])


def test_g_scan_bound_violation(monkeypatch):
    fake = blk.ExitRecord(0.1, 0.0, 1.0, 3.0, 1.0, 1.0, 0.0, "exited")
    monkeypatch.setattr(blk, "block_map", lambda *a, **k: fake)
    with pytest.raises(blk.BoundViolation):
        blk.g_scan(BLOCK, [0.1])


def test_richardson_exact_on_linear_model():
    phis = np.array([1e-3, 1e-4, 1e-5])
    x = 1.0 / (np.log(1.0 / phis) + 100.0)
    assert blk.richardson_limit(phis, 0.25 + 3.0 * x, 0.1) == pytest.approx(0.25, abs=1e-14)


def test_inverse_slope_on_model():
    phis = np.array([1e-4, 1e-5, 1e-6])
    G = 1.0 / ((2 / math.pi) * np.log(1 / phis) + 50.0)
    assert blk.inverse_drift_slope(phis, G) == pytest.approx(2 / math.pi, rel=1e-10)


def test_rddot_flow_matches_finite_difference():
    for r in (0.1, 0.05, 0.02):
        s = reg.RegState(r, 0.5 * math.pi, 0.3, reg.w_from_energy(r, 0.0))
        fd = blk.rddot_finite_difference(s)
        assert blk.rddot_flow(r, s.w) == pytest.approx(fd, rel=1e-4)
        assert blk.rddot_flow(r, s.w) > 0


def test_rddot_stated_differs_by_e2w():
    r = 0.1
    w = reg.w_from_energy(r, 0.0)
    assert blk.rddot_flow(r, w) == pytest.approx(math.exp(2 * w) * blk.rddot_stated(r, w), rel=1e-14)


def test_bijection_small_sample():
    rep = blk.verify_bijection(BLOCK, samples=8)
    assert rep.passed


def test_omega_limit_probe_on_a_plus():
    pr = blk.omega_limit_probe(BLOCK.boundary_state(0.0, 0.7), 0.0)
    assert pr.outcome == "converged_to_S_plus"
    assert pr.final.r < 1e-6 and abs(math.exp(2 * pr.final.w) - 2) < 1e-6
    assert pr.final.psi == 0.7


def test_omega_limit_probe_rejects_wrong_level():
    with pytest.raises(DomainError):
        blk.omega_limit_probe(BLOCK.boundary_state(0.0, 0.0), 1.0)


def test_wilson_yorke_report_structure():
    rep = blk.wilson_yorke_check(BLOCK, samples=6)
    names = [c.name for c in rep.checks]
    assert names == ["rddot_positive", "rddot_stated_matches_fd", "rddot_flow_matches_fd", "tangent_space_identity"]
    by = {c.name: c for c in rep.checks}
    assert by["rddot_positive"].passed and by["rddot_flow_matches_fd"].passed and by["tangent_space_identity"].passed
