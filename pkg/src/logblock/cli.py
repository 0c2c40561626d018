"""Command-line front end.

    logblock simulate   --chart regularized --state 0.1,0,0.5 --h 0 --span 1e12
    logblock map-block  --h 0 --delta 0.1 --phi0 0.785398 --psi0 0
    logblock scan-exit  --h 0 --delta 0.1 --grid log:1e-1:1e-6:6
    logblock verify     all
    logblock hill       --h 1 --c 1
    logblock transform  --from cartesian --to regularized --state 0.3,0,0,1

Exit codes: 0 success, 1 a mathematical check or integration failed, 2 usage
or configuration error.  Values resolve as flag > config file > default; the
config file is ``--config`` or ``$LOGBLOCK_CONFIG``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dynamics as dyn
from . import regularization as reg
from .block import (
    BoundViolation,
    InvalidBlockError,
    block_map,
    g_scan,
    make_block,
)
from .integrator import IntegrationConfig, IntegrationError, augment, integrate
from .verify import SUITES, run_suite

log = logging.getLogger("logblock")

DEFAULTS = {
    "h": 0.0,
    "c": None,
    "delta": None,
    "phi0": 0.25 * math.pi,
    "psi0": 0.0,
    "span": None,  # simulate: 10, block commands: 200
    "rel_tol": 1e-12,
    "abs_tol": 1e-12,
    "max_steps": 2_000_000,
    "grid": None,
    "symmetric": False,
    "out": "-",
    "format": None,
    "jobs": os.cpu_count() or 1,
    "chart": "regularized",
    "state": None,
    "from": None,
    "to": None,
    "verbose": False,
}
CONFIG_ENV = "LOGBLOCK_CONFIG"


class UsageError(Exception):
    pass


# --- formatting ------------------------------------------------------------

def fmt(x) -> str:
    return format(float(x), ".17g")


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats at 17 significant digits and non-finite floats as null."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


# --- configuration -----------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    values: dict

    def __getattr__(self, key):
        try:
            return self.values[key]
        except KeyError:
            raise AttributeError(key) from None

    def integration(self, default_span: float) -> IntegrationConfig:
        span = self.span if self.span is not None else default_span
        try:
            return IntegrationConfig(rel_tol=self.rel_tol, abs_tol=self.abs_tol,
                                     max_span=span, max_steps=int(self.max_steps))
        except ValueError as exc:
            raise UsageError(str(exc)) from None


def read_config_file(path: str) -> dict:
    out = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        out[key] = val
    return out


def _coerce(key: str, raw):
    if raw is None or not isinstance(raw, str):
        return raw
    default = DEFAULTS[key]
    try:
        if key in ("max_steps", "jobs"):
            return int(raw)
        if key in ("symmetric", "verbose"):
            return raw.strip().lower() in ("1", "true", "yes", "on")
        if isinstance(default, float) or key in ("c", "delta", "span"):
            return parse_number(raw)
    except ValueError:
        raise UsageError(f"bad value for {key}: {raw!r}") from None
    return raw


def parse_number(text: str) -> float:
    t = text.strip().lower().replace(" ", "")
    consts = {"pi": math.pi, "e": math.e}
    for name, val in consts.items():
        if t == name:
            return val
        if t.endswith("*" + name):
            return float(t[: -len(name) - 1]) * val
        if t.endswith(name) and t[: -len(name)].replace(".", "", 1).replace("-", "", 1).isdigit():
            return float(t[: -len(name)]) * val
        if t.startswith(name + "/"):
            return val / float(t[len(name) + 1:])
    if "/" in t:
        num, den = t.split("/", 1)
        return parse_number(num) / parse_number(den)
    return float(t)


def resolve(args: argparse.Namespace) -> RunConfig:
    cfg_path = args.config or os.environ.get(CONFIG_ENV)
    file_vals = read_config_file(cfg_path) if cfg_path else {}
    vals = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None and flag is not False:
            vals[key] = _coerce(key, flag)
        elif key in file_vals:
            vals[key] = _coerce(key, file_vals[key])
        else:
            vals[key] = default
    return RunConfig(vals)


def parse_state(text: str | None, n_min: int, n_max: int) -> list[float]:
    if text is None:
        raise UsageError("--state is required")
    try:
        vals = [parse_number(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse state {text!r}") from None
    if not n_min <= len(vals) <= n_max:
        raise UsageError(f"state needs {n_min}..{n_max} components, got {len(vals)}")
    return vals


def parse_grid(spec: str | None) -> list[float]:
    """``log:START:STOP:N``, ``lin:START:STOP:N`` or a comma-separated list."""
    if spec is None or not spec.strip():
        raise UsageError("empty phi0 grid")
    try:
        if spec.startswith(("log:", "lin:")):
            kind, a, b, n = spec.split(":")
            n = int(n)
            if n <= 0:
                raise UsageError("empty phi0 grid")
            a, b = parse_number(a), parse_number(b)
            if kind == "log":
                return list(np.logspace(math.log10(a), math.log10(b), n))
            return list(np.linspace(a, b, n))
        vals = [parse_number(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad grid {spec!r}") from None
    if not vals:
        raise UsageError("empty phi0 grid")
    return vals


# --- commands ----------------------------------------------------------------

def cmd_simulate(rc: RunConfig) -> int:
    chart = rc.chart
    icfg = rc.integration(10.0)
    if chart == "cartesian":
        if rc.state is None and rc.c is not None:
            s0 = dyn.polar_to_cartesian(dyn.circular_orbit(rc.c))
        else:
            s0 = dyn.PhysState.from_array(parse_state(rc.state, 4, 4))
        h0, c0 = dyn.hamiltonian_cartesian(s0), dyn.angular_momentum(s0)
        tr = integrate(dyn.cartesian_rhs, s0.as_array(), icfg)
        header = ["t", "qx", "qy", "px", "py", "energy_residual", "momentum_residual"]
        rows = []
        for t, y in zip(tr.t, tr.y):
            s = dyn.PhysState.from_array(y)
            rows.append([t, *y, dyn.hamiltonian_cartesian(s) - h0, dyn.angular_momentum(s) - c0])
    elif chart == "polar":
        if rc.state is None and rc.c is not None:
            ps = dyn.circular_orbit(rc.c)
        else:
            ps = dyn.PolarState(*parse_state(rc.state, 4, 4))
        c = ps.p_theta
        h0 = dyn.hamiltonian_polar(ps)
        tr = integrate(dyn.polar_rhs(c), [ps.r, ps.theta, ps.p_r], icfg)
        header = ["t", "r", "theta", "p_r", "p_theta", "energy_residual", "momentum_residual"]
        rows = [[t, y[0], dyn.wrap_angle(y[1]), y[2], c, dyn.reduced_hamiltonian(y[0], y[2], c) - h0, 0.0]
                for t, y in zip(tr.t, tr.y)]
    elif chart == "regularized":
        vals = parse_state(rc.state, 3, 4)
        h = rc.h
        if len(vals) == 3:
            vals.append(reg.w_from_energy(vals[0], h))
        s0 = reg.RegState(*vals)
        res0 = reg.extended_energy_residual(s0, h)
        if abs(res0) > 1e-9:
            raise UsageError(f"initial state is off the energy level h = {h} (residual {res0:.3g}); omit w to auto-complete")
        c0 = reg.extended_momentum(s0)
        full = augment(reg.reg_rhs, [lambda t, y: reg.dt_dtau(y[0], y[3])], 4)
        tr = integrate(full, [*s0.as_array(), 0.0], icfg, n_state=4)
        header = ["tau", "r", "phi", "psi", "w", "energy_residual", "momentum_residual", "t_phys"]
        rows = []
        for t, y in zip(tr.t, tr.y):
            s = reg.RegState.from_array(y[:4])
            t_phys = y[4] if s.r > 0.0 else math.nan  # physical time is undefined on r = 0
            rows.append([t, s.r, dyn.wrap_angle(s.phi), dyn.wrap_angle(s.psi), s.w,
                         reg.extended_energy_residual(s, h), reg.extended_momentum(s) - c0, t_phys])
    else:
        raise UsageError(f"unknown chart {chart!r}")
    if (rc.format or "csv") == "json":
        emit(to_json([dict(zip(header, r)) for r in rows]) + "\n", rc.out)
    else:
        emit(to_csv(header, rows), rc.out)
    return 0


def _block(rc: RunConfig):
    try:
        return make_block(rc.h, rc.delta)
    except InvalidBlockError as exc:
        raise UsageError(str(exc)) from None


def cmd_map_block(rc: RunConfig) -> int:
    block = _block(rc)
    try:
        rec = block_map(block, rc.phi0, rc.psi0, rc.integration(200.0))
    except dyn.DomainError as exc:
        raise UsageError(str(exc)) from None
    d = rec.as_dict()
    d["phi_exit"] = dyn.wrap_angle(rec.phi_exit)
    d["psi_exit"] = dyn.wrap_angle(rec.psi_exit)
    d["h"], d["delta"], d["w_delta"] = block.h, block.delta, block.w_delta
    emit(to_json(d) + "\n", rc.out)
    return 0


def cmd_scan_exit(rc: RunConfig) -> int:
    block = _block(rc)
    phis = parse_grid(rc.grid)
    if rc.symmetric:
        phis = phis + [2.0 * math.pi - p for p in phis]
    icfg = rc.integration(200.0)
    try:
        rows = g_scan(block, phis, rc.psi0, icfg, jobs=rc.jobs, check_bound=False)
    except dyn.DomainError as exc:
        raise UsageError(str(exc)) from None
    header = ["phi0", "phi_exit", "psi_exit", "G", "tau_exit", "status"]
    table = [[r.phi0, dyn.wrap_angle(r.phi_exit), dyn.wrap_angle(r.psi_exit), r.G, r.tau_exit, r.status]
             for r in rows]
    if (rc.format or "csv") == "json":
        emit(to_json([dict(zip(header, r)) for r in table]) + "\n", rc.out)
    else:
        emit(to_csv(header, table), rc.out)
    bound = 2.0 * block.delta**2
    bad = [r.phi0 for r in rows if abs(r.G) > bound + 1e-9]
    if bad:
        log.error("|G| > 2 delta^2 = %g at phi0 = %s", bound, bad)
        return 1
    return 0


def cmd_verify(rc: RunConfig, suite: str) -> int:
    report = run_suite(suite)
    emit(to_json(report) + "\n", rc.out)
    return 0 if report["passed"] else 1


def cmd_hill(rc: RunConfig) -> int:
    c = rc.c if rc.c is not None else 0.0
    try:
        r_min, r_max = dyn.hill_bounds(rc.h, c)
    except dyn.InfeasibleEnergyError as exc:
        log.error("%s", exc)
        sys.stderr.write(f"infeasible: {exc}\n")
        return 1
    out = {"h": rc.h, "c": c, "r_min": r_min, "r_max": r_max, "h_min": None if c == 0.0 else dyn.h_min(c)}
    emit(to_json(out) + "\n", rc.out)
    return 0


def cmd_transform(rc: RunConfig) -> int:
    src, dst = rc.values["from"], rc.values["to"]
    charts = ("cartesian", "polar", "regularized")
    if src not in charts or dst not in charts:
        raise UsageError(f"--from/--to must be one of {charts}")
    vals = parse_state(rc.state, 4, 4)
    if src == "cartesian":
        phys = dyn.PhysState.from_array(vals)
    elif src == "polar":
        phys = dyn.polar_to_cartesian(dyn.PolarState(*vals))
    else:
        phys = reg.reg_to_phys(reg.RegState(*vals))
    if dst == "cartesian":
        out = {"qx": phys.q[0], "qy": phys.q[1], "px": phys.p[0], "py": phys.p[1]}
    elif dst == "polar":
        ps = dyn.cartesian_to_polar(phys)
        out = {"r": ps.r, "theta": ps.theta, "p_r": ps.p_r, "p_theta": ps.p_theta}
    else:
        rs = reg.phys_to_reg(phys)
        out = {"r": rs.r, "phi": rs.phi, "psi": rs.psi, "w": rs.w}
    out["energy"] = dyn.hamiltonian_cartesian(phys)
    out["p_theta"] = dyn.angular_momentum(phys)
    emit(to_json(out) + "\n", rc.out)
    return 0


# --- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--h", type=str, help="energy level")
    common.add_argument("--c", type=str, help="angular momentum")
    common.add_argument("--delta", type=str, help="block radius")
    common.add_argument("--phi0", type=str, help="entry angle (accepts pi/4 style)")
    common.add_argument("--psi0", type=str, help="entry momentum angle")
    common.add_argument("--span", type=str, help="integration horizon in t or tau")
    common.add_argument("--rel-tol", dest="rel_tol", type=str)
    common.add_argument("--abs-tol", dest="abs_tol", type=str)
    common.add_argument("--max-steps", dest="max_steps", type=str)
    common.add_argument("--grid", type=str, help="log:START:STOP:N, lin:START:STOP:N or a comma list")
    common.add_argument("--symmetric", action="store_true", help="also scan 2pi - phi0")
    common.add_argument("--out", type=str, help="output path, '-' for stdout")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--jobs", type=str, help="worker processes for scans")
    common.add_argument("--config", type=str, help=f"key = value file (default ${CONFIG_ENV})")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="logblock", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", parents=[common], help="integrate one orbit and write samples")
    sim.add_argument("--chart", choices=("cartesian", "polar", "regularized"))
    sim.add_argument("--state", type=str, help="comma-separated initial state")
    sub.add_parser("map-block", parents=[common], help="map one entry point across the block")
    sub.add_parser("scan-exit", parents=[common], help="tabulate exit data and G over a phi0 grid")
    ver = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ver.add_argument("suite", choices=(*SUITES, "all"))
    sub.add_parser("hill", parents=[common], help="Hill-region bounds for (h, c)")
    tr = sub.add_parser("transform", parents=[common], help="convert a state between charts")
    tr.add_argument("--from", dest="from", choices=("cartesian", "polar", "regularized"), required=True)
    tr.add_argument("--to", dest="to", choices=("cartesian", "polar", "regularized"), required=True)
    tr.add_argument("--state", type=str, required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on bad usage
    try:
        rc = resolve(args)
        logging.basicConfig(level=logging.INFO if rc.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        if args.command == "simulate":
            return cmd_simulate(rc)
        if args.command == "map-block":
            return cmd_map_block(rc)
        if args.command == "scan-exit":
            return cmd_scan_exit(rc)
        if args.command == "verify":
            return cmd_verify(rc, args.suite)
        if args.command == "hill":
            return cmd_hill(rc)
        if args.command == "transform":
            return cmd_transform(rc)
    except UsageError as exc:
        sys.stderr.write(f"logblock: error: {exc}\n")
        return 2
    except (dyn.DomainError, dyn.InfeasibleEnergyError) as exc:
        sys.stderr.write(f"logblock: error: {exc}\n")
        return 2
    except (IntegrationError, BoundViolation) as exc:
        sys.stderr.write(f"logblock: failed: {exc}\n")
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
