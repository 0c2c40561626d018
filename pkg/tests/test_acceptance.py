"""One test per acceptance criterion, each at its stated tolerance.

Every test prints a single pass/fail line; the lines are repeated in the
terminal summary under "acceptance criteria".
"""
import math

import pytest

from logblock import dynamics as dyn
from logblock import verify as v
from logblock.block import make_block, verify_bijection, wilson_yorke_check


@pytest.fixture(scope="module")
def block_map_report():
    return {c["name"]: c for c in v.run_suite("block_map")["suites"]["block_map"]}


def test_criterion_01_conservation(criterion):
    res, mom, runs = v.regularized_conservation(hs=(-1.0, 0.0, 1.0), span=50.0)
    ok = res < 1e-9 and mom < 1e-9 and runs > 0
    criterion(1, ok, f"EEO residual {res:.2e} < 1e-9, momentum drift {mom:.2e} < 1e-9 ({runs} runs with r >= 0.2)")
    assert ok


def test_criterion_02_round_trips(criterion):
    pr, rp, cp, _ = v.transform_round_trips(n=1000)
    ok = max(pr, rp, cp) < 1e-10
    criterion(2, ok, f"phys->reg->phys {pr:.2e}, reg->phys->reg {rp:.2e}, cart->polar->cart {cp:.2e} (< 1e-10)")
    assert ok


def test_criterion_03_flow_equivalence(criterion):
    d = v.flow_equivalence(h=1.0, c=0.5)
    ok = d < 1e-6
    criterion(3, ok, f"curve distance {d:.2e} < 1e-6 over one radial oscillation")
    assert ok


def test_criterion_04_collision_manifold(criterion):
    phi_err, frozen = v.collision_manifold_exactness()
    ok = phi_err < 1e-10 and frozen == 0.0
    criterion(4, ok, f"closed-form phi error {phi_err:.2e} < 1e-10, r/psi/w change {frozen:.1e}")
    assert ok


def test_criterion_05_wilson_yorke(criterion):
    rep = wilson_yorke_check(make_block(0.0, 0.1), samples=100)
    by = {c.name: c for c in rep.checks}
    pos, stated, flow = by["rddot_positive"], by["rddot_stated_matches_fd"], by["rddot_flow_matches_fd"]
    ok = pos.passed and stated.passed
    criterion(5, ok, f"stated r'' > 0: {pos.passed}; stated formula vs finite difference rel {stated.measured:.3g} "
                     f"(tol 1e-4); exact field derivative rel {flow.measured:.2e}")
    assert pos.passed
    assert stated.measured < 1e-4


def test_criterion_06_exit_law(criterion, block_map_report):
    law, plus_gap, _, _ = v.exit_law_scan(h=0.0, delta=0.1, n=50)
    finding = block_map_report.get("c_negative_pi_plus_phi0_law")
    ok = law < 1e-6 and finding is not None
    criterion(6, ok, f"|phi_exit - (pi - phi0)| {law:.2e} < 1e-6 on 50 entries; "
                     f"pi + phi0 law on c < 0 side misses by >= {plus_gap:.3g} (recorded as finding)")
    assert law < 1e-6
    assert finding is not None and finding["measured"] == plus_gap


def test_criterion_07_trivializability(criterion):
    rows, gmax, monotone, limit, slope = v.g_limit_witness(h=0.0, delta=0.1)
    bound = 2.0 * 0.1**2
    ok = gmax <= bound and monotone and abs(limit) < 1e-4 * bound
    gs = ", ".join(f"{r.G:.6f}" for r in rows)
    criterion(7, ok, f"max|G| {gmax:.4g} <= {bound:g}; monotone {monotone} (G = {gs}); "
                     f"extrapolated limit {abs(limit):.3g} vs {1e-4 * bound:.0e}; 1/G slope {slope:.3f} (2/pi = 0.637)")
    assert gmax <= bound
    assert monotone
    assert abs(limit) < 1e-4 * bound


def test_criterion_08_bijection(criterion):
    rep = verify_bijection(make_block(0.0, 0.1), samples=50)
    criterion(8, rep.passed, f"return error {rep.max_return_error:.2e} < 1e-7, "
                             f"min exit separation {rep.min_exit_separation:.2e}, tangency fixed {rep.tangency_fixed}")
    assert rep.passed


def test_criterion_09_collision_requires_c_zero(criterion):
    shortfall, outcomes = v.nonzero_momentum_confinement(horizon=1e3)
    fwd, _ = v.asymptotic_launch(psi0=0.7)
    e2w = abs(math.exp(2.0 * fwd.final.w) - 2.0)
    confined = len(outcomes) == 20 and shortfall <= 1e-6 and all(o == "bounded_nonconvergent" for o in outcomes)
    converged = fwd.outcome == "converged_to_S_plus" and fwd.final.r < 1e-6 and e2w < 1e-6 and fwd.final.psi == 0.7
    ok = confined and converged
    criterion(9, ok, f"20 c != 0 orbits: worst r_min shortfall {shortfall:.2e} <= 1e-6; a+ launch: r {fwd.final.r:.1e}, "
                     f"|e^2w - 2| {e2w:.1e}, psi frozen {fwd.final.psi == 0.7}")
    assert confined
    assert converged


def test_criterion_10_hill_and_circular(criterion):
    hill = v.hill_root_residual()
    drift, speed = v.circular_orbit_drift(periods=100)
    ok = hill < 1e-10 and drift < 1e-6 and speed < 1e-12
    criterion(10, ok, f"|V_red(root) - h| {hill:.1e} < 1e-10, circular radius drift {drift:.1e} < 1e-6, "
                      f"speed error {speed:.1e} < 1e-12")
    assert ok
    assert dyn.hill_bounds(0.0, 0.0) == (0.0, 1.0)
