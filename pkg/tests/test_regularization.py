import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from logblock import dynamics as dyn
from logblock import regularization as reg

finite = dict(allow_nan=False, allow_infinity=False)


def test_f_and_g_extensions():
    assert reg.f_ext(0.0) == 0.0
    assert reg.f_ext(1.0) == 0.0
    assert reg.f_ext(math.e) == pytest.approx(math.e**2, rel=1e-15)
    assert reg.g_ext(0.0) == 0.0
    assert reg.g_ext(1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert reg.g_ext(0.03) == 0.0  # underflow is accepted


def test_w_from_energy():
    assert reg.w_from_energy(0.0, 0.0) == pytest.approx(0.5 * math.log(2.0), abs=1e-15)
    assert reg.w_from_energy(1.0, 0.0) == pytest.approx(0.5 * math.log(2.0), abs=1e-15)
    with pytest.raises(dyn.InfeasibleEnergyError):
        reg.w_from_energy(100.0, -1.0)


def test_extended_momentum_examples():
    assert reg.extended_momentum(reg.RegState(0.0, 1.0, 2.0, 0.3)) == 0.0
    assert reg.extended_momentum(reg.RegState(1.0, 0.5 * math.pi, 0.0, 0.0)) == pytest.approx(math.exp(-1.0), rel=1e-15)


@settings(max_examples=200)
@given(st.floats(0.3, 5.0, **finite), st.floats(0, 2 * math.pi, **finite),
       st.floats(0, 2 * math.pi, **finite), st.floats(-3, 3, **finite))
def test_extended_momentum_is_minus_p_theta(r, phi, psi, w):
    s = reg.RegState(r, phi, psi, w)
    p = reg.reg_to_phys(s)
    scale = p.radius * math.hypot(*p.p)
    assert abs(reg.extended_momentum(s) + dyn.angular_momentum(p)) <= 1e-12 * scale


def test_energy_identity_matches_physical_hamiltonian():
    for r, h in ((0.5, 0.0), (1.2, 1.0), (0.3, -1.0)):
        s = reg.RegState(r, 0.7, 2.1, reg.w_from_energy(r, h))
        assert dyn.hamiltonian_cartesian(reg.reg_to_phys(s)) == pytest.approx(h, abs=1e-12)
        assert reg.energy_of(s) == pytest.approx(h, abs=1e-12)


def _pushforward(s: reg.RegState, eps=1e-6) -> np.ndarray:
    """d(reg)/dtau from the physical field through the coordinate map (finite differences)."""
    phys = reg.reg_to_phys(s)
    qdot, pdot = dyn.vector_field_cartesian(phys)
    y = phys.as_array()
    v = np.array([*qdot, *pdot])

    def chart(z):
        out = reg.phys_to_reg(dyn.PhysState.from_array(z)).as_array()
        return out

    base = chart(y)
    hi, lo = chart(y + eps * v), chart(y - eps * v)
    d = hi - lo
    d[1:3] = (d[1:3] + math.pi) % (2 * math.pi) - math.pi
    ddt = d / (2 * eps)
    assert np.isfinite(base).all()
    return ddt * reg.dt_dtau(s.r, s.w)


@pytest.mark.parametrize("s", [
    reg.RegState(0.8, 0.4, 1.0, 0.1),
    reg.RegState(1.5, 2.5, 4.0, -0.5),
    reg.RegState(0.5, 4.0, 0.3, 0.4),
    reg.RegState(2.0, 5.5, 2.2, 0.9),
])
def test_vector_field_against_physical_pushforward(s):
    got = np.array(reg.reg_vector_field(s))
    ref = _pushforward(s)
    assert np.allclose(got, ref, rtol=1e-6, atol=1e-8 * np.max(np.abs(ref)))


def test_field_vanishing_components_on_collision_manifold():
    dr, dphi, dpsi, dw = reg.reg_vector_field(reg.RegState(0.0, 1.0, 2.0, reg.HALF_LN2))
    assert dr == 0.0 and dpsi == 0.0 and dw == 0.0
    assert dphi == pytest.approx(2.0 * math.sin(1.0), rel=1e-15)


def test_smooth_extension_at_zero():
    f0 = np.array(reg.reg_vector_field(reg.RegState(0.0, 0.9, 0.1, 0.3)))
    for r in (1e-8, 1e-6, 1e-4):
        f = np.array(reg.reg_vector_field(reg.RegState(r, 0.9, 0.1, 0.3)))
        assert np.max(np.abs(f - f0)) <= 10 * r * r


def test_sign_of_rdot_follows_cos_phi():
    for phi in np.linspace(0.05, 2 * math.pi - 0.05, 40):
        if abs(math.cos(phi)) < 1e-9:
            continue
        s = reg.RegState(0.05, float(phi), 0.0, reg.w_from_energy(0.05, 0.0))
        dr = reg.reg_vector_field(s)[0]
        assert (dr < 0) == (math.cos(phi) > 0)


def test_equilibria_are_exact_at_float_pi():
    for phi in (0.0, math.pi, 2 * math.pi, -math.pi):
        assert reg.reg_vector_field(reg.RegState(0.0, phi, 0.0, reg.HALF_LN2))[1] == 0.0


def test_time_rate():
    s = reg.RegState(0.5, 0.0, 0.0, 0.0)
    assert reg.time_reparam_rate(s) < 0
    assert reg.time_reparam_rate(s) * reg.dt_dtau(0.5, 0.0) == pytest.approx(1.0, rel=1e-14)
    assert reg.dt_dtau(0.0, 0.3) == 0.0
    with pytest.raises(dyn.DomainError):
        reg.time_reparam_rate(reg.RegState(0.0, 0.0, 0.0, 0.0))


def _rho_inverse_bisect(rho):
    lo, hi = 1e-3, 1e6
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if mid * math.exp(-1.0 / mid**2) < rho:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@settings(max_examples=100)
@given(st.floats(-300, 5, **finite))
def test_blown_up_radius_against_bisection(log10_rho):
    rho = 10.0**log10_rho
    r = reg.blown_up_radius(rho)
    assert r == pytest.approx(_rho_inverse_bisect(rho), rel=1e-12)


def test_blown_up_radius_rejects_nonpositive():
    with pytest.raises(dyn.DomainError):
        reg.blown_up_radius(0.0)


def test_round_trip_example():
    s = dyn.PhysState((0.3, 0.0), (0.0, 1.0))
    back = reg.reg_to_phys(reg.phys_to_reg(s))
    assert np.allclose(back.as_array(), s.as_array(), atol=1e-14)


def test_transform_domain_errors():
    with pytest.raises(dyn.DomainError):
        reg.reg_to_phys(reg.RegState(0.0, 0.0, 0.0, 0.0))
    with pytest.raises(dyn.DomainError):
        reg.reg_to_phys(reg.RegState(0.03, 0.0, 0.0, 0.0))  # subnormal |q|
    with pytest.raises(dyn.DomainError):
        reg.phys_to_reg(dyn.PhysState((0.3, 0.0), (0.0, 0.0)))
    with pytest.raises(dyn.DomainError):
        reg.RegState(-1.0, 0.0, 0.0, 0.0)


@settings(max_examples=200)
@given(st.floats(0.05, 8.0, **finite), st.floats(0, 2 * math.pi, **finite),
       st.floats(0, 2 * math.pi, **finite), st.floats(-3, 3, **finite))
def test_reg_round_trip_property(r, phi, psi, w):
    s = reg.RegState(r, phi, psi, w)
    back = reg.phys_to_reg(reg.reg_to_phys(s))
    assert back.r == pytest.approx(r, rel=1e-11)
    assert back.w == pytest.approx(w, abs=1e-11 * max(1.0, abs(w)))
    for a, b in ((back.phi, phi), (back.psi, psi)):
        assert abs(math.remainder(a - b, 2 * math.pi)) < 1e-10


def test_collision_manifold_solution_examples():
    assert reg.collision_manifold_solution(0.5 * math.pi, 0.0) == pytest.approx(0.5 * math.pi, abs=1e-15)
    assert reg.collision_manifold_solution(0.5 * math.pi, 0.5) == pytest.approx(2 * math.atan(math.e), abs=1e-14)
    assert reg.collision_manifold_solution(0.5 * math.pi, 20.0) == pytest.approx(math.pi, abs=1e-12)
    with pytest.raises(dyn.DomainError):
        reg.collision_manifold_solution(math.pi, 1.0)
    with pytest.raises(dyn.DomainError):
        reg.collision_manifold_solution(0.0, 1.0)


@pytest.mark.parametrize("phi0", [0.3, 1.5707963267948966, 2.9, 4.0, 6.0, -1.0, 8.0])
def test_collision_manifold_solution_against_ode(phi0):
    sol = solve_ivp(lambda t, y: [2.0 * math.sin(y[0])], (0.0, 1.5), [phi0], method="DOP853",
                    rtol=1e-13, atol=1e-14, dense_output=True)
    for t in (0.1, 0.5, 1.0, 1.5):
        assert reg.collision_manifold_solution(phi0, t) == pytest.approx(sol.sol(t)[0], abs=1e-10)
    assert reg.collision_manifold_solution(phi0, -0.7) == pytest.approx(
        solve_ivp(lambda t, y: [2.0 * math.sin(y[0])], (0.0, -0.7), [phi0], method="DOP853",
                  rtol=1e-13, atol=1e-14).y[0, -1], abs=1e-10)


def test_reversing_symmetry():
    s = reg.RegState(0.4, 1.1, 2.2, 0.3)
    mm = reg.reversing_symmetry(reg.reversing_symmetry(s))
    assert mm.r == s.r and mm.w == s.w
    assert math.cos(mm.phi) == pytest.approx(math.cos(s.phi), abs=1e-15)
    assert reg.reversing_symmetry(reg.RegState(0.0, 0.0, 0.0, reg.HALF_LN2)).phi == math.pi


@settings(max_examples=300)
@given(st.floats(0.0, 3.0, **finite), st.floats(-10, 10, **finite),
       st.floats(-10, 10, **finite), st.floats(-3, 3, **finite))
def test_reversing_symmetry_reverses_field(r, phi, psi, w):
    s = reg.RegState(r, phi, psi, w)
    f = np.array(reg.reg_vector_field(s))
    fm = np.array(reg.reg_vector_field(reg.reversing_symmetry(s)))
    assert np.max(np.abs(fm + f)) <= 1e-13 * max(1.0, np.max(np.abs(f)))
