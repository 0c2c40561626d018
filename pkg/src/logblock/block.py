"""The isolating block B = {r <= delta} around the collision manifold.

Boundary points (delta, phi, psi, w_delta) are classified by the sign of
cos(phi); the map across the block sends an entry point to the point where
its orbit next leaves B, and is extended over the asymptotic circle phi = 0
by (delta, 0, psi0) -> (delta, pi, psi0).
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .dynamics import DomainError, InfeasibleEnergyError, wrap_angle
from .integrator import (
    EventSpec,
    IntegrationConfig,
    integrate,
    integrate_with_quadrature,
)
from .regularization import (
    RegState,
    energy_of,
    extended_momentum,
    f_ext,
    f_ext_prime,
    g_ext,
    reg_rhs,
    reversing_symmetry,
    sin_cos,
    w_from_energy,
)

ANGLE_TOL = 1e-12
# entries this close to phi = 0 are routed to the analytic extension
ASYMPTOTIC_CUTOFF = 1e-9
BLOCK_CONFIG = IntegrationConfig(max_span=200.0)


class InvalidBlockError(ValueError):
    pass


def angle_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle."""
    d = math.fmod(abs(a - b), 2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def default_delta(h: float) -> float:
    """min(0.1, e^{h-1}/2), nudged away from the forbidden radius e^{h-1/2}."""
    delta = min(0.1, 0.5 * math.exp(h - 1.0))
    forbidden = math.exp(h - 0.5)
    if abs(delta - forbidden) < 0.05 * forbidden:
        delta = 0.5 * forbidden
    return delta


@dataclass(frozen=True)
class BlockSpec:
    h: float
    delta: float
    w_delta: float

    @property
    def boundary_momentum_scale(self) -> float:
        """e^{w_delta} g(delta): the extended momentum is this times sin(phi) on b."""
        return math.exp(self.w_delta) * g_ext(self.delta)

    def boundary_state(self, phi: float, psi: float) -> RegState:
        return RegState(self.delta, phi, psi, self.w_delta)


def make_block(h: float, delta: float | None = None) -> BlockSpec:
    if delta is None:
        delta = default_delta(h)
    if not delta > 0.0:
        raise InvalidBlockError(f"delta must be positive, got {delta!r}")
    try:
        w_delta = w_from_energy(delta, h)
    except InfeasibleEnergyError as exc:
        raise InvalidBlockError(f"energy condition h delta^2 - f(delta) + 1 > 0 fails: {exc}") from None
    if 2.0 * math.log(delta) + 1.0 - 2.0 * h == 0.0 or math.isclose(
        math.log(delta), h - 0.5, rel_tol=0.0, abs_tol=1e-12
    ):
        raise InvalidBlockError(
            f"gradient condition 2 ln(delta) + 1 - 2h != 0 fails at delta = {delta}"
        )
    if not math.exp(2.0 * w_delta) - delta * delta > 0.0:
        raise InvalidBlockError(f"tangency condition e^(2 w_delta) - delta^2 > 0 fails at delta = {delta}")
    return BlockSpec(h, delta, w_delta)


class BoundaryClass(enum.Enum):
    ENTRY = "entry"
    EXIT = "exit"
    TANGENCY = "tangency"
    ASYMPTOTIC_IN = "asymptotic_in"
    ASYMPTOTIC_OUT = "asymptotic_out"


def classify_boundary(phi0: float, tol: float = ANGLE_TOL) -> BoundaryClass:
    if angle_distance(phi0, 0.0) <= tol:
        return BoundaryClass.ASYMPTOTIC_IN
    if angle_distance(phi0, math.pi) <= tol:
        return BoundaryClass.ASYMPTOTIC_OUT
    if angle_distance(phi0, 0.5 * math.pi) <= tol or angle_distance(phi0, 1.5 * math.pi) <= tol:
        return BoundaryClass.TANGENCY
    return BoundaryClass.ENTRY if math.cos(phi0) > 0.0 else BoundaryClass.EXIT


@dataclass(frozen=True)
class ExitRecord:
    phi0: float
    psi0: float
    tau_exit: float
    phi_exit: float
    psi_exit: float
    G: float
    c: float
    status: str  # "exited", "asymptotic" or "horizon_exceeded"
    boundary_class: str = "entry"
    r_exit: float = math.nan

    def as_dict(self) -> dict:
        return {
            "phi0": self.phi0,
            "psi0": self.psi0,
            "boundary_class": self.boundary_class,
            "status": self.status,
            "tau_exit": self.tau_exit,
            "phi_exit": self.phi_exit,
            "psi_exit": self.psi_exit,
            "G": self.G,
            "c": self.c,
            "r_exit": self.r_exit,
        }


def _drift_integrand(t: float, y: np.ndarray) -> float:
    return y[0] * y[0] * sin_cos(y[1])[0]


def _crossing_trajectory(block: BlockSpec, phi0: float, psi0: float, config: IntegrationConfig):
    exit_event = EventSpec(lambda t, y, d=block.delta: y[0] - d, "rising", terminal=True)
    y0 = block.boundary_state(phi0, psi0).as_array()
    return integrate_with_quadrature(reg_rhs, y0, config, [_drift_integrand], [exit_event])


def block_map(
    block: BlockSpec, phi0: float, psi0: float, config: IntegrationConfig = BLOCK_CONFIG
) -> ExitRecord:
    """Follow the entry point (delta, phi0, psi0, w_delta) until it leaves B.

    Exit angles are reported unwrapped as produced by the flow; use
    :func:`wrap_angle` for display.
    """
    cls = classify_boundary(phi0)
    c = extended_momentum(block.boundary_state(phi0, psi0))
    if cls in (BoundaryClass.EXIT, BoundaryClass.ASYMPTOTIC_OUT):
        raise DomainError(f"phi0 = {phi0} is on the exit side of the boundary ({cls.value})")
    if cls is BoundaryClass.ASYMPTOTIC_IN or angle_distance(phi0, 0.0) < ASYMPTOTIC_CUTOFF:
        return ExitRecord(phi0, psi0, math.inf, math.pi, psi0, 0.0, c, "asymptotic",
                          BoundaryClass.ASYMPTOTIC_IN.value, block.delta)
    if cls is BoundaryClass.TANGENCY:
        # r'' > 0 there, so the orbit touches b and leaves at once
        return ExitRecord(phi0, psi0, 0.0, phi0, psi0, 0.0, c, "exited", cls.value, block.delta)
    tr = _crossing_trajectory(block, phi0, psi0, config)
    r, phi, psi, _, G = tr.final
    status = "exited" if tr.status == "terminated" else "horizon_exceeded"
    return ExitRecord(phi0, psi0, float(tr.t[-1]), float(phi), float(psi), float(G), c, status,
                      cls.value, float(r))


# --- scans ---------------------------------------------------------------

@dataclass(frozen=True)
class GScanRow:
    phi0: float
    G: float
    tau_exit: float
    phi_exit: float
    psi_exit: float
    status: str


class BoundViolation(ArithmeticError):
    pass


def _map_all(block, phis, psi0, config, jobs):
    # pool.map keeps input order, so the table does not depend on completion order
    if jobs and jobs > 1 and len(phis) > 1:
        work = partial(_map_one, block, psi0=psi0, config=config)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(work, phis))
    return [block_map(block, p, psi0, config) for p in phis]


def _map_one(block, phi0, psi0, config):
    return block_map(block, phi0, psi0, config)


def g_scan(
    block: BlockSpec,
    phis,
    psi0: float = 0.0,
    config: IntegrationConfig = BLOCK_CONFIG,
    jobs: int = 1,
    check_bound: bool = True,
) -> list[GScanRow]:
    """Drift integral G(phi0) for each entry angle, sorted by phi0."""
    phis = sorted(float(p) for p in phis)
    for p in phis:
        cls = classify_boundary(p)
        if cls is not BoundaryClass.ENTRY:
            raise DomainError(f"phi0 = {p} is not an interior entry point ({cls.value})")
    recs = _map_all(block, phis, psi0, config, jobs)
    rows = [GScanRow(r.phi0, r.G, r.tau_exit, r.phi_exit, r.psi_exit, r.status) for r in recs]
    if check_bound:
        bound = 2.0 * block.delta**2 + 1e-9
        bad = [row for row in rows if abs(row.G) > bound]
        if bad:
            raise BoundViolation(f"|G| > 2 delta^2 at phi0 = {[b.phi0 for b in bad]}")
    return rows


def richardson_limit(phis, values, delta: float) -> float:
    """Linear Richardson extrapolation of G to phi0 -> 0.

    The expansion variable is x = 1 / (ln(1/phi0) + 1/delta^2): near the
    asymptotic circle the orbit lingers close to phi = 0 for a time of order
    ln(1/phi0)/2 while 1/r^2 grows by about 2 per unit time, so the swing
    through phi = pi/2 happens at r^2 ~ x and G ~ (pi/2) x.  The two smallest
    angles are used.
    """
    order = np.argsort(np.abs(phis))
    p = np.abs(np.asarray(phis, dtype=float)[order[:2]])
    g = np.asarray(values, dtype=float)[order[:2]]
    x = 1.0 / (np.log(1.0 / p) + 1.0 / delta**2)
    return float(g[0] - x[0] * (g[1] - g[0]) / (x[1] - x[0]))


def inverse_drift_slope(phis, values) -> float:
    """Least-squares slope of 1/G against ln(1/phi0); tends to 2/pi as phi0 -> 0."""
    x = np.log(1.0 / np.abs(np.asarray(phis, dtype=float)))
    y = 1.0 / np.asarray(values, dtype=float)
    return float(np.polyfit(x, y, 1)[0])


def drift_by_quadrature(block: BlockSpec, log_sin_phi0: float) -> float:
    """G(phi0) from a phi-quadrature along the conserved-momentum curve.

    On the orbit, w(r) - 1/r^2 = w_delta - 1/delta^2 + ln(sin phi0 / sin phi),
    and dpsi/dphi = r^2 / (e^{2w} - r^2).  The orbit is symmetric about
    phi = pi/2, so G = 2 * integral over [phi0, pi/2].  ``log_sin_phi0`` lets
    phi0 be far below the double-precision range.
    """
    h, d = block.h, block.delta
    base = block.w_delta - 1.0 / d**2 + log_sin_phi0

    def radius(phi: float) -> float:
        target = base - math.log(math.sin(phi))
        F = lambda r: w_from_energy(r, h) - 1.0 / (r * r) - target  # noqa: E731
        hi = d
        if F(hi) <= 0.0:
            return d
        # F is increasing in r below delta; target is finite so 1/r^2 ~ -target bounds r
        lo = min(0.5 * d, 1.0 / math.sqrt(max(4.0, 4.0 - 2.0 * target)))
        while F(lo) > 0.0:
            lo *= 0.5
        return brentq(F, lo, hi, xtol=1e-300, rtol=1e-15, maxiter=300)

    def integrand(phi: float) -> float:
        r = radius(phi)
        return r * r / (2.0 * (h * r * r - f_ext(r) + 1.0) - r * r)

    lo_phi = math.exp(log_sin_phi0) if log_sin_phi0 > -700.0 else 0.0
    lo_phi = math.asin(min(lo_phi, 1.0))
    val, _ = quad(integrand, lo_phi, 0.5 * math.pi, epsabs=1e-16, epsrel=1e-13, limit=500)
    return 2.0 * val


# --- Wilson-Yorke conditions -------------------------------------------------

def rddot_stated(r: float, w: float) -> float:
    """r^3 (e^{2w} - r^2) / (r^2 + 2), as written for the tangency condition."""
    return r**3 * (math.exp(2.0 * w) - r * r) / (r * r + 2.0)


def rddot_flow(r: float, w: float, phi: float = 0.5 * math.pi) -> float:
    """d^2 r / d tau^2 of the regularized field at a point with cos(phi) = 0.

    Differentiating dr/dtau = -r^3 e^{2w} cos(phi) / (r^2 + 2) with cos(phi) = 0
    leaves only the phi-derivative term, which carries an extra e^{2w}.
    """
    e2w = math.exp(2.0 * w)
    return r**3 * e2w * (e2w - r * r) * math.sin(phi) ** 2 / (r * r + 2.0)


def rddot_finite_difference(state: RegState, step: float = 1e-3) -> float:
    """Centered second difference of r along the flow (integrated both ways)."""
    y0 = state.as_array()
    cfg = IntegrationConfig(max_span=step, rel_tol=1e-13, abs_tol=1e-16)
    fwd = integrate(reg_rhs, y0, cfg).final[0]
    bwd = integrate(reg_rhs, y0, cfg, direction=-1).final[0]
    return (fwd - 2.0 * state.r + bwd) / (step * step)


def tangent_identity_residual(state: RegState, h: float) -> float:
    """e^{2w} dw + (f'(r) - 2 h r) dr evaluated on the field, scaled by the term sizes."""
    dr, _, _, dw = reg_rhs(0.0, state.as_array())[[0, 1, 2, 3]]
    a = math.exp(2.0 * state.w) * dw
    b = (f_ext_prime(state.r) - 2.0 * h * state.r) * dr
    return abs(a + b) / max(abs(a), abs(b), 1e-300)


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "measured": self.measured,
                "tolerance": self.tolerance, "detail": self.detail}


@dataclass
class WilsonYorkeReport:
    checks: list[Check]
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def wilson_yorke_check(block: BlockSpec, samples: int = 100, seed: int = 0) -> WilsonYorkeReport:
    """Sample tangency states with 0 < r <= delta on the level h and test r'' > 0.

    Both the stated closed form and the exact derivative of the field are
    compared against a centered finite difference along the flow.
    """
    rng = np.random.default_rng(seed)
    rs = block.delta * rng.uniform(0.05, 1.0, samples)
    rs[0] = block.delta
    worst_stated = worst_flow = worst_tangent = 0.0
    min_rddot = math.inf
    violations = []
    for k, r in enumerate(rs):
        phi = 0.5 * math.pi if k % 2 == 0 else 1.5 * math.pi
        psi = float(rng.uniform(0.0, 2.0 * math.pi))
        w = w_from_energy(float(r), block.h)
        s = RegState(float(r), phi, psi, w)
        fd = rddot_finite_difference(s)
        stated = rddot_stated(s.r, w)
        exact = rddot_flow(s.r, w, phi)
        err_stated = abs(stated - fd) / abs(fd)
        err_flow = abs(exact - fd) / abs(fd)
        worst_stated = max(worst_stated, err_stated)
        worst_flow = max(worst_flow, err_flow)
        min_rddot = min(min_rddot, stated, exact)
        # off-tangency sample for the tangent-space identity
        off = RegState(s.r, float(rng.uniform(0.0, 2.0 * math.pi)), psi, w)
        worst_tangent = max(worst_tangent, tangent_identity_residual(off, block.h))
        if stated <= 0.0 or exact <= 0.0:
            violations.append({"r": s.r, "phi": phi, "psi": psi, "w": w, "rddot": exact})
    checks = [
        Check("rddot_positive", min_rddot > 0.0, min_rddot, 0.0, "minimum over samples"),
        Check("rddot_stated_matches_fd", worst_stated < 1e-4, worst_stated, 1e-4,
              "r^3 (e^{2w} - r^2)/(r^2 + 2) vs finite difference"),
        Check("rddot_flow_matches_fd", worst_flow < 1e-4, worst_flow, 1e-4,
              "r^3 e^{2w} (e^{2w} - r^2)/(r^2 + 2) vs finite difference"),
        Check("tangent_space_identity", worst_tangent < 1e-10, worst_tangent, 1e-10,
              "relative residual of e^{2w} w' + (f'(r) - 2hr) r'"),
    ]
    return WilsonYorkeReport(checks, violations)


# --- bijection and limit sets ---------------------------------------------------

@dataclass
class BijectionReport:
    max_return_error: float
    min_exit_separation: float
    tangency_fixed: bool
    samples: int

    @property
    def passed(self) -> bool:
        return self.max_return_error < 1e-7 and self.min_exit_separation > 1e-9 and self.tangency_fixed


def _state_distance(a, b) -> float:
    return max(abs(a[0] - b[0]), angle_distance(a[1], b[1]), angle_distance(a[2], b[2]), abs(a[3] - b[3]))


def verify_bijection(
    block: BlockSpec,
    samples: int = 50,
    config: IntegrationConfig = BLOCK_CONFIG,
    seed: int = 1,
    phi_min: float = 1e-2,
) -> BijectionReport:
    """Forward to the exit, backward by the same tau, and compare with the entry."""
    rng = np.random.default_rng(seed)
    half = rng.uniform(phi_min, 0.5 * math.pi - phi_min, samples)
    phis = np.where(np.arange(samples) % 2 == 0, half, 2.0 * math.pi - half)
    psis = rng.uniform(0.0, 2.0 * math.pi, samples)
    worst = 0.0
    exits = []
    for phi0, psi0 in zip(phis, psis):
        rec = block_map(block, float(phi0), float(psi0), config)
        exit_state = np.array([rec.r_exit, rec.phi_exit, rec.psi_exit, block.w_delta])
        back = integrate(reg_rhs, exit_state, config, direction=-1, span=rec.tau_exit).final
        worst = max(worst, _state_distance(back, block.boundary_state(phi0, psi0).as_array()))
        exits.append((rec.phi_exit, rec.psi_exit))
    sep = math.inf
    for i in range(len(exits)):
        for j in range(i + 1, len(exits)):
            d = max(angle_distance(exits[i][0], exits[j][0]), angle_distance(exits[i][1], exits[j][1]))
            sep = min(sep, d)
    tang = block_map(block, 0.5 * math.pi, 0.0, config)
    fixed = tang.tau_exit == 0.0 and angle_distance(tang.phi_exit, 0.5 * math.pi) == 0.0
    return BijectionReport(worst, sep, fixed, samples)


@dataclass(frozen=True)
class ProbeResult:
    outcome: str  # converged_to_S_plus, converged_to_S_minus, bounded_nonconvergent
    tau: float
    final: RegState
    psi_star: float
    min_r: float
    min_phys_radius: float


def omega_limit_probe(
    state0: RegState,
    h: float,
    config: IntegrationConfig = IntegrationConfig(max_span=1e14),
    backward: bool = False,
    tol: float = 1e-6,
) -> ProbeResult:
    """Integrate toward the omega-limit (or alpha-limit with ``backward``) of ``state0``.

    Convergence to S+ (resp. S-) is declared once r, |sin phi| and |e^{2w} - 2|
    are all below ``tol`` with phi near 0 (resp. pi).  Reaching the horizon
    without that is reported as bounded_nonconvergent.
    """
    if state0.r > 0.0 and abs(energy_of(state0) - h) > 1e-8 * max(1.0, abs(h)):
        raise DomainError("state0 does not lie on the requested energy level")
    target = math.pi if backward else 0.0

    def near(t, y):
        if angle_distance(y[1], target) >= 0.5 * math.pi:
            return -1.0
        return tol - max(y[0], abs(sin_cos(y[1])[0]), abs(math.exp(2.0 * y[3]) - 2.0))

    stop = EventSpec(near, "rising", terminal=True)
    tr = integrate(reg_rhs, state0.as_array(), config, [stop], direction=-1 if backward else 1)
    final = RegState.from_array(tr.final)
    rs = tr.state[:, 0]
    with np.errstate(over="ignore", divide="ignore"):
        phys = np.where(rs > 0, rs * np.exp(-1.0 / np.where(rs > 0, rs, 1.0) ** 2), 0.0)
    if tr.status == "terminated":
        outcome = "converged_to_S_minus" if backward else "converged_to_S_plus"
    else:
        outcome = "bounded_nonconvergent"
    return ProbeResult(outcome, float(tr.t[-1]), final, wrap_angle(final.psi),
                       float(rs.min()), float(phys.min()))


def exit_law_errors(rec: ExitRecord) -> tuple[float, float]:
    """Distance of phi_exit from pi - phi0 and from pi + phi0 (both mod 2pi)."""
    return angle_distance(rec.phi_exit, math.pi - rec.phi0), angle_distance(rec.phi_exit, math.pi + rec.phi0)


def symmetric_partner_drift(block: BlockSpec, rec: ExitRecord, config: IntegrationConfig = BLOCK_CONFIG) -> float:
    """Drift of the partner orbit obtained from ``rec`` by the reversing symmetry.

    The exit point mapped by (phi, psi) -> (phi + pi, psi + pi) is an entry
    point whose orbit is the reverse of the original one shifted by pi; its
    drift must be -G.
    """
    start = reversing_symmetry(RegState(block.delta, rec.phi_exit, rec.psi_exit, block.w_delta))
    return block_map(block, wrap_angle(start.phi), start.psi, config).G

