"""Blow-up of the collision singularity.

Coordinates (r, phi, psi, w) relate to the physical chart by

    q = r exp(-1/r^2) (cos(phi + psi), sin(phi + psi)),
    p = (e^w / r) (cos psi, sin psi),

and time is rescaled by d(tau) = -(1/r^2) exp(1/r^2 - w) dt.  The rescaled
field is smooth through r = 0, where the invariant torus e^{2w} = 2 (the
collision manifold) is glued in.

Sign convention: with phi = (position angle) - (momentum angle) the
extended momentum ``e^w g(r) sin(phi)`` equals ``-p_theta`` of the
physical chart.  ``tests/test_regularization.py`` pins this down.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

from .dynamics import DomainError, InfeasibleEnergyError, PhysState, wrap_angle

HALF_LN2 = 0.5 * math.log(2.0)


@dataclass(frozen=True)
class RegState:
    """Blown-up state.  Angles are kept as given (unwrapped); wrap at output."""

    r: float
    phi: float
    psi: float
    w: float

    def __post_init__(self) -> None:
        if self.r < 0.0:
            raise DomainError(f"blown-up radius must be >= 0, got {self.r!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.r, self.phi, self.psi, self.w], dtype=float)

    @classmethod
    def from_array(cls, y) -> "RegState":
        return cls(float(y[0]), float(y[1]), float(y[2]), float(y[3]))

    def wrapped(self) -> "RegState":
        return RegState(self.r, wrap_angle(self.phi), wrap_angle(self.psi), self.w)


@dataclass(frozen=True)
class ManifoldPoint:
    phi: float
    psi: float

    def to_reg(self) -> RegState:
        return RegState(0.0, self.phi, self.psi, HALF_LN2)


def f_ext(r: float) -> float:
    """r^2 ln r, continuously extended by 0 at r = 0."""
    if r == 0.0:
        return 0.0
    return r * r * math.log(r)


def f_ext_prime(r: float) -> float:
    if r == 0.0:
        return 0.0
    return r * (2.0 * math.log(r) + 1.0)


def g_ext(r: float) -> float:
    """exp(-1/r^2), extended by 0 at r = 0.  Underflows to 0 below r ~ 0.038."""
    if r == 0.0:
        return 0.0
    return math.exp(-1.0 / (r * r))


def energy_rhs(r: float, h: float) -> float:
    """h r^2 - f(r) + 1, which must equal e^{2w} / 2 on the level h."""
    return h * r * r - f_ext(r) + 1.0


def w_from_energy(r: float, h: float) -> float:
    arg = energy_rhs(r, h)
    if not arg > 0.0:
        raise InfeasibleEnergyError(f"r = {r} lies beyond r_Max({h}); h r^2 - f(r) + 1 = {arg}")
    return 0.5 * math.log(2.0 * arg)


def extended_energy_residual(s: RegState, h: float) -> float:
    return 0.5 * math.exp(2.0 * s.w) - energy_rhs(s.r, h)


def energy_of(s: RegState) -> float:
    """Energy level h on which ``s`` lies (requires r > 0)."""
    if s.r == 0.0:
        raise DomainError("every level passes through r = 0")
    return (0.5 * math.exp(2.0 * s.w) + f_ext(s.r) - 1.0) / (s.r * s.r)


def extended_momentum(s: RegState) -> float:
    return math.exp(s.w) * g_ext(s.r) * sin_cos(s.phi)[0]


def sin_cos(phi: float) -> tuple[float, float]:
    """sin and cos measured from the nearest float multiple of pi.

    Makes the equilibria phi = k * math.pi exact, so orbits started on the
    asymptotic circles stay there instead of drifting off by 1e-16 per unit
    of unstable growth.
    """
    k = round(phi / math.pi)
    d = phi - k * math.pi
    if k % 2:
        return -math.sin(d), -math.cos(d)
    return math.sin(d), math.cos(d)


def reg_rhs(tau: float, y: np.ndarray) -> np.ndarray:
    r, phi, _, w = y[0], y[1], y[2], y[3]
    r2 = r * r
    e2w = math.exp(2.0 * w)
    s, c = sin_cos(phi)
    return np.array([
        -r * r2 * e2w * c / (r2 + 2.0),
        (e2w - r2) * s,
        r2 * s,
        r2 * (1.0 - e2w / (r2 + 2.0)) * c,
    ])


def reg_vector_field(s: RegState) -> tuple[float, float, float, float]:
    """(dr, dphi, dpsi, dw) / d(tau)."""
    return tuple(float(v) for v in reg_rhs(0.0, s.as_array()))


def time_reparam_rate(s: RegState) -> float:
    """d(tau)/dt; negative, and singular on the collision manifold."""
    if s.r == 0.0:
        raise DomainError("physical time is frozen on the collision manifold")
    return -math.exp(1.0 / (s.r * s.r) - s.w) / (s.r * s.r)


def dt_dtau(r: float, w: float) -> float:
    """Reciprocal rate, -r^2 exp(w - 1/r^2); 0 at r = 0 by continuity."""
    if r == 0.0:
        return 0.0
    return -r * r * math.exp(w - 1.0 / (r * r))


def reg_to_phys(s: RegState) -> PhysState:
    if s.r == 0.0:
        raise DomainError("blow-down is singular at r = 0")
    rho = s.r * g_ext(s.r)
    if rho < sys.float_info.min:
        # subnormal |q| has lost its mantissa; r below ~0.0377 is not representable
        raise DomainError(f"r = {s.r} maps below the smallest normal |q|")
    pos = s.phi + s.psi
    speed = math.exp(s.w) / s.r
    return PhysState(
        (rho * math.cos(pos), rho * math.sin(pos)),
        (speed * math.cos(s.psi), speed * math.sin(s.psi)),
    )


def blown_up_radius(rho: float, rtol: float = 1e-14) -> float:
    """Invert rho = r exp(-1/r^2) for r > 0.

    rho(r) is strictly increasing with rho(r) < r, so [r_lo, r_hi] is found by
    doubling from rho; Newton does the polishing and bisection takes over
    whenever a Newton step leaves the bracket.
    """
    if not rho > 0.0:
        raise DomainError(f"|q| must be positive, got {rho!r}")
    log_rho = math.log(rho)

    # work with F(r) = ln r - 1/r^2 - ln rho, also increasing, but tame for tiny rho
    def F(r: float) -> float:
        return math.log(r) - 1.0 / (r * r) - log_rho

    lo = hi = max(rho, 1e-3)
    while F(hi) < 0.0:
        hi *= 2.0
    while F(lo) > 0.0:
        lo *= 0.5
    r = 0.5 * (lo + hi)
    for _ in range(200):
        val = F(r)
        if val == 0.0:
            return r
        if val < 0.0:
            lo = r
        else:
            hi = r
        step = val / (1.0 / r + 2.0 / r**3)
        r_new = r - step
        if not lo < r_new < hi:
            r_new = 0.5 * (lo + hi)
        if abs(r_new - r) <= rtol * r_new:
            return r_new
        r = r_new
    return r


def phys_to_reg(s: PhysState) -> RegState:
    px, py = s.p
    speed = math.hypot(px, py)
    if speed == 0.0:
        raise DomainError("w = ln(r |p|) is undefined at zero momentum")
    r = blown_up_radius(s.radius)
    psi = wrap_angle(math.atan2(py, px))
    phi = wrap_angle(math.atan2(s.q[1], s.q[0]) - psi)
    return RegState(r, phi, psi, math.log(r * speed))


def collision_manifold_solution(phi0: float, tau: float) -> float:
    """Closed-form solution of dphi/dtau = 2 sin(phi): tan(phi/2) = e^{2 tau} tan(phi0/2).

    The returned angle lies in the same open half-circle as ``phi0``
    (unwrapped, continuous in ``tau``).
    """
    if math.sin(phi0) == 0.0 or wrap_angle(phi0) in (0.0, math.pi):
        raise DomainError("phi0 in {0, pi} is an equilibrium; use the constant solution")
    k = math.floor(phi0 / (2.0 * math.pi))
    base = phi0 - 2.0 * math.pi * k  # in (0, 2pi)
    half = 0.5 * base
    if base < math.pi:
        out = 2.0 * math.atan(math.exp(2.0 * tau) * math.tan(half))
    else:
        # tan(half) < 0 on (pi, 2pi); atan lands in (-pi/2, 0)
        out = 2.0 * math.atan(math.exp(2.0 * tau) * math.tan(half)) + 2.0 * math.pi
    return out + 2.0 * math.pi * k


def reversing_symmetry(s: RegState) -> RegState:
    """(r, phi, psi, w) -> (r, phi + pi, psi + pi, w); conjugates the flow to its reversal."""
    return RegState(s.r, s.phi + math.pi, s.psi + math.pi, s.w)

