"""Planar motion in the logarithmic central potential.

Unit mass and unit coupling throughout: H(q, p) = |p|^2 / 2 + ln|q|.
The polar chart reduces the problem to one degree of freedom with the
angular momentum ``c = p_theta`` as a parameter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

TWO_PI = 2.0 * math.pi


class DomainError(ValueError):
    """Raised when a state or parameter sits on a singular point of a chart."""


class InfeasibleEnergyError(ValueError):
    """Raised when no motion exists for the requested (h, c) pair."""


def wrap_angle(a: float) -> float:
    """Map an angle into [0, 2pi)."""
    a = math.fmod(a, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2pi
    return 0.0 if a >= TWO_PI else a


@dataclass(frozen=True)
class PhysState:
    q: tuple[float, float]
    p: tuple[float, float]

    def __post_init__(self) -> None:
        if math.hypot(*self.q) == 0.0:
            raise DomainError("position at the origin is singular")

    @property
    def radius(self) -> float:
        return math.hypot(*self.q)

    def as_array(self) -> np.ndarray:
        return np.array([*self.q, *self.p], dtype=float)

    @classmethod
    def from_array(cls, y) -> "PhysState":
        return cls((float(y[0]), float(y[1])), (float(y[2]), float(y[3])))


@dataclass(frozen=True)
class PolarState:
    r: float
    theta: float
    p_r: float
    p_theta: float

    def __post_init__(self) -> None:
        if not self.r > 0.0:
            raise DomainError(f"polar radius must be positive, got {self.r!r}")
        object.__setattr__(self, "theta", wrap_angle(self.theta))


@dataclass(frozen=True)
class Invariants:
    h: float
    c: float


def hamiltonian_cartesian(s: PhysState) -> float:
    px, py = s.p
    return 0.5 * (px * px + py * py) + math.log(s.radius)


def vector_field_cartesian(s: PhysState) -> tuple[tuple[float, float], tuple[float, float]]:
    """Return (dq/dt, dp/dt) = (p, -q/|q|^2)."""
    qx, qy = s.q
    r2 = qx * qx + qy * qy
    return s.p, (-qx / r2, -qy / r2)


def cartesian_rhs(t: float, y: np.ndarray) -> np.ndarray:
    """Array form of :func:`vector_field_cartesian` for the integrator."""
    qx, qy, px, py = y
    r2 = qx * qx + qy * qy
    if r2 == 0.0:
        raise DomainError("position at the origin is singular")
    return np.array([px, py, -qx / r2, -qy / r2])


def angular_momentum(s: PhysState) -> float:
    return s.q[0] * s.p[1] - s.q[1] * s.p[0]


def invariants(s: PhysState) -> Invariants:
    return Invariants(hamiltonian_cartesian(s), angular_momentum(s))


def cartesian_to_polar(s: PhysState) -> PolarState:
    qx, qy = s.q
    px, py = s.p
    r = math.hypot(qx, qy)
    p_r = (qx * px + qy * py) / r
    return PolarState(r, math.atan2(qy, qx), p_r, qx * py - qy * px)


def polar_to_cartesian(s: PolarState) -> PhysState:
    ct, st = math.cos(s.theta), math.sin(s.theta)
    pt = s.p_theta / s.r
    return PhysState((s.r * ct, s.r * st), (s.p_r * ct - pt * st, s.p_r * st + pt * ct))


def hamiltonian_polar(s: PolarState) -> float:
    return reduced_hamiltonian(s.r, s.p_r, s.p_theta)


def reduced_potential(r: float, c: float) -> float:
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got {r!r}")
    return 0.5 * c * c / (r * r) + math.log(r)


def reduced_hamiltonian(r: float, p_r: float, c: float) -> float:
    return 0.5 * p_r * p_r + reduced_potential(r, c)


def reduced_vector_field(r: float, p_r: float, c: float) -> tuple[float, float]:
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got {r!r}")
    return p_r, c * c / r**3 - 1.0 / r


def polar_rhs(c: float):
    """Right-hand side in (r, theta, p_r) at fixed angular momentum ``c``."""

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        r, _, p_r = y
        if not r > 0.0:
            raise DomainError("polar radius reached zero")
        return np.array([p_r, c / (r * r), c * c / r**3 - 1.0 / r])

    return rhs


def h_min(c: float) -> float:
    """Lowest energy compatible with angular momentum ``c`` (the circular orbit)."""
    if c == 0.0:
        raise DomainError("no energy floor for c = 0; collision orbits reach every h")
    return 0.5 + math.log(abs(c))


def _grow_upper(h: float, c: float, start: float) -> float:
    R = max(start, 1.0)
    while reduced_potential(R, c) <= h:
        R *= 2.0
    return R


def hill_bounds(h: float, c: float, rtol: float = 1e-12) -> tuple[float, float]:
    """Radial interval allowed by V_red(r) <= h.

    V_red is unimodal with its minimum at r = |c|, so each root is bracketed
    on one side of the minimum and refined with Brent's method.
    """
    if c == 0.0:
        return 0.0, math.exp(h)
    hm = h_min(c)
    ac = abs(c)
    if h < hm:
        raise InfeasibleEnergyError(f"h = {h} is below h_min(c) = {hm} for c = {c}")
    if h == hm:
        return ac, ac

    def g(r: float) -> float:
        return reduced_potential(r, c) - h

    lo = 1e-15 * ac
    # V_red(lo) can overflow to inf for absurdly small c; shrink toward |c| until finite
    while not math.isfinite(g(lo)):
        lo = math.sqrt(lo * ac)
    if g(ac) >= 0.0:
        # h exceeds h_min by less than the rounding of V_red at its minimum
        return ac, ac
    r_min = brentq(g, lo, ac, xtol=1e-300, rtol=rtol, maxiter=500)
    r_max = brentq(g, ac, _grow_upper(h, c, 2.0 * ac), xtol=1e-300, rtol=rtol, maxiter=500)
    return r_min, r_max


def circular_orbit(c: float) -> PolarState:
    if c == 0.0:
        raise DomainError("circular orbits need c != 0")
    return PolarState(abs(c), 0.0, 0.0, c)


def radial_period(h: float, c: float) -> float:
    """Time for one full radial oscillation r_min -> r_max -> r_min (c != 0)."""
    from scipy.integrate import quad

    r_min, r_max = hill_bounds(h, c)
    if r_max == r_min:
        return TWO_PI * r_min * r_min / abs(c)
    # substitution r = mid - half*cos(u) removes the inverse square-root endpoints
    mid, half = 0.5 * (r_max + r_min), 0.5 * (r_max - r_min)

    def integrand(u: float) -> float:
        r = mid - half * math.cos(u)
        kinetic = 2.0 * (h - reduced_potential(r, c))
        if kinetic <= 0.0:
            return 0.0
        return half * math.sin(u) / math.sqrt(kinetic)

    # near the turning points kinetic ~ sin(u)^2, so the integrand stays bounded
    val, _ = quad(integrand, 0.0, math.pi, epsabs=1e-13, epsrel=1e-13, limit=200)
    return 2.0 * val
