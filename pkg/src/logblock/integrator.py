"""Adaptive Dormand-Prince 5(4) integration with dense output and events.

Stepping is delegated to :class:`scipy.integrate.RK45`; this module adds the
step budget, distinct failure modes, event location on the per-step
interpolant, and quadrature accumulators carried as extra state components.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import RK45
from scipy.optimize import brentq

Field = Callable[[float, np.ndarray], np.ndarray]


class IntegrationError(RuntimeError):
    pass


class StepSizeUnderflow(IntegrationError):
    pass


class MaxStepsExceeded(IntegrationError):
    pass


class NonFiniteState(IntegrationError):
    pass


@dataclass(frozen=True)
class IntegrationConfig:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-12
    initial_step: float | None = None
    max_step: float = math.inf
    max_span: float = 200.0
    max_steps: int = 2_000_000

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol <= 1e-3 and 0.0 < self.abs_tol <= 1e-3):
            raise ValueError("tolerances must lie in (0, 1e-3]")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if not self.max_span > 0.0:
            raise ValueError("max_span must be positive")


@dataclass(frozen=True)
class EventSpec:
    """A scalar function of (t, y) whose strict sign changes are located.

    ``direction`` is "rising" (- to +), "falling" (+ to -) or "any".  A zero
    value counts as the far side of the crossing, so a trajectory that starts
    exactly on the event surface does not trigger it.
    """

    fn: Callable[[float, np.ndarray], float]
    direction: str = "any"
    terminal: bool = False
    refine_tol: float = 1e-12

    def __post_init__(self) -> None:
        if self.direction not in ("rising", "falling", "any"):
            raise ValueError(f"bad event direction {self.direction!r}")

    def crossed(self, g0: float, g1: float) -> bool:
        rising = g0 < 0.0 <= g1
        falling = g0 > 0.0 >= g1
        if self.direction == "rising":
            return rising
        if self.direction == "falling":
            return falling
        return rising or falling


@dataclass(frozen=True)
class EventHit:
    index: int
    t: float
    y: np.ndarray


@dataclass(frozen=True)
class TrajectorySample:
    tau: float
    state: tuple[float, ...]
    chart: str
    t_phys: float = math.nan
    aux: tuple[float, ...] = ()


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray  # shape (n_steps + 1, dim), the step endpoints
    n_state: int
    events: list[EventHit] = field(default_factory=list)
    status: str = "completed"  # or "terminated" when a terminal event fired
    _dense: list = field(default_factory=list, repr=False)

    @property
    def state(self) -> np.ndarray:
        return self.y[:, : self.n_state]

    @property
    def aux(self) -> np.ndarray:
        return self.y[:, self.n_state :]

    @property
    def final(self) -> np.ndarray:
        return self.y[-1]

    def __call__(self, t: float) -> np.ndarray:
        """Evaluate the dense interpolant (full augmented vector) at ``t``."""
        ts = self.t
        forward = ts[-1] >= ts[0]
        key = t if forward else -t
        grid = ts if forward else -ts
        i = int(np.searchsorted(grid, key, side="right")) - 1
        i = min(max(i, 0), len(self._dense) - 1)
        if not self._dense:
            return self.y[0].copy()
        return self._dense[i](t)

    def sample(self, ts: Sequence[float]) -> np.ndarray:
        return np.array([self(t) for t in ts])


def _locate(spec: EventSpec, dense, t0: float, t1: float) -> float:
    def g(t: float) -> float:
        return spec.fn(t, dense(t))

    g0, g1 = g(t0), g(t1)
    if g1 == 0.0:
        return t1
    if g0 == 0.0 or (g0 > 0.0) == (g1 > 0.0):
        # the interpolant disagrees with the step endpoints in sign; trust the endpoint
        return t1
    lo, hi = (t0, t1) if t0 < t1 else (t1, t0)
    return brentq(g, lo, hi, xtol=spec.refine_tol, rtol=4 * np.finfo(float).eps, maxiter=200)


def integrate(
    rhs: Field,
    y0,
    config: IntegrationConfig = IntegrationConfig(),
    events: Sequence[EventSpec] = (),
    t0: float = 0.0,
    direction: int = 1,
    span: float | None = None,
    n_state: int | None = None,
) -> Trajectory:
    """Integrate ``rhs`` from ``y0`` over ``span`` (default ``config.max_span``).

    ``direction=-1`` integrates backward.  Raises a subclass of
    :class:`IntegrationError` on step underflow, an exhausted step budget, or
    a non-finite state.
    """
    y0 = np.asarray(y0, dtype=float)
    if not np.all(np.isfinite(y0)):
        raise NonFiniteState(f"initial state is not finite: {y0}")
    f0 = rhs(t0, y0)
    if not np.all(np.isfinite(f0)):
        raise NonFiniteState(f"field is not finite at the initial state: {f0}")
    span = config.max_span if span is None else span
    t_bound = t0 + math.copysign(span, direction)
    kwargs = {"first_step": config.initial_step} if config.initial_step else {}
    solver = RK45(
        rhs, t0, y0, t_bound,
        rtol=config.rel_tol, atol=config.abs_tol, max_step=config.max_step,
        vectorized=False, **kwargs,
    )
    ts = [t0]
    ys = [y0.copy()]
    dense = []
    hits: list[EventHit] = []
    g_prev = [spec.fn(t0, y0) for spec in events]
    status = "completed"
    steps = 0
    while solver.status == "running":
        if steps >= config.max_steps:
            raise MaxStepsExceeded(f"step budget {config.max_steps} exhausted at t = {solver.t}")
        msg = solver.step()
        steps += 1
        if solver.status == "failed":
            raise StepSizeUnderflow(f"{msg} (t = {solver.t})")
        t_new, y_new = solver.t, solver.y
        if not np.all(np.isfinite(y_new)):
            raise NonFiniteState(f"non-finite state at t = {t_new}")
        sol = solver.dense_output()
        t_old = ts[-1]
        stop_at = None
        step_hits = []
        for k, spec in enumerate(events):
            g_new = spec.fn(t_new, y_new)
            if spec.crossed(g_prev[k], g_new):
                t_hit = _locate(spec, sol, t_old, t_new)
                step_hits.append(EventHit(k, t_hit, sol(t_hit)))
                if spec.terminal and (stop_at is None or direction * (t_hit - stop_at) < 0):
                    stop_at = t_hit
            g_prev[k] = g_new
        step_hits.sort(key=lambda e: direction * e.t)
        if stop_at is not None:
            hits.extend(e for e in step_hits if direction * (e.t - stop_at) <= 0)
            ts.append(stop_at)
            ys.append(sol(stop_at))
            dense.append(sol)
            status = "terminated"
            break
        hits.extend(step_hits)
        ts.append(t_new)
        ys.append(y_new.copy())
        dense.append(sol)
    return Trajectory(np.array(ts), np.array(ys), n_state or len(y0), hits, status, dense)


def augment(rhs: Field, integrands: Sequence[Callable[[float, np.ndarray], float]], n_state: int) -> Field:
    """Append quadrature accumulators whose derivatives are ``integrands``."""

    def full(t: float, y: np.ndarray) -> np.ndarray:
        x = y[:n_state]
        return np.concatenate([rhs(t, x), [q(t, x) for q in integrands]])

    return full


def integrate_with_quadrature(
    rhs: Field,
    y0,
    config: IntegrationConfig = IntegrationConfig(),
    integrands: Sequence[Callable[[float, np.ndarray], float]] = (),
    events: Sequence[EventSpec] = (),
    **kwargs,
) -> Trajectory:
    """As :func:`integrate`, with running integrals of ``integrands`` in ``Trajectory.aux``.

    Integrands and event functions see only the state part of the vector.
    """
    y0 = np.asarray(y0, dtype=float)
    n = len(y0)
    full = augment(rhs, integrands, n)
    wrapped = [
        EventSpec(lambda t, y, fn=e.fn: fn(t, y[:n]), e.direction, e.terminal, e.refine_tol)
        for e in events
    ]
    z0 = np.concatenate([y0, np.zeros(len(integrands))])
    return integrate(full, z0, config, wrapped, n_state=n, **kwargs)
