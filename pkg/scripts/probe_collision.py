"""Follow orbits toward collision: the a+ launch, the a- backward launch, and c != 0 orbits.

    python3 scripts/probe_collision.py --h 0 --delta 0.1
"""
import argparse
import math

from logblock import dynamics as dyn
from logblock import regularization as reg
from logblock.block import make_block, omega_limit_probe
from logblock.integrator import IntegrationConfig


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h", type=float, default=0.0)
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--psi0", type=float, default=0.7)
    ap.add_argument("--horizon", type=float, default=1e3, help="tau horizon for the c != 0 orbits")
    args = ap.parse_args()
    block = make_block(args.h, args.delta)

    for label, phi, backward in (("a+ forward", 0.0, False), ("a- backward", math.pi, True)):
        pr = omega_limit_probe(block.boundary_state(phi, args.psi0), args.h, backward=backward)
        print(f"{label:12s} {pr.outcome:22s} tau {pr.tau:.3e}  r {pr.final.r:.2e}  "
              f"e^2w-2 {math.exp(2 * pr.final.w) - 2:.2e}  psi* {pr.psi_star:.12g}")

    cfg = IntegrationConfig(max_span=args.horizon)
    print(f"\n{'c':>6} {'h':>8} {'r_min':>10} {'min |q|':>10} outcome")
    for c in (0.2, -0.2, 0.5, -0.5):
        h = dyn.h_min(c) + 0.2
        r_min, r_max = dyn.hill_bounds(h, c)
        s0 = reg.phys_to_reg(dyn.PhysState((r_max, 0.0), (0.0, c / r_max)))
        pr = omega_limit_probe(s0, h, cfg)
        print(f"{c:6.2f} {h:8.4f} {r_min:10.6f} {pr.min_phys_radius:10.6f} {pr.outcome}")


if __name__ == "__main__":
    main()
