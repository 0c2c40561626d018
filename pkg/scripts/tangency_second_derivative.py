"""Compare closed forms for d^2r/dtau^2 at tangency points with a finite difference along the flow.

    python3 scripts/tangency_second_derivative.py --h 0 --delta 0.1
"""
import argparse
import math

from logblock import regularization as reg
from logblock.block import rddot_finite_difference, rddot_flow, rddot_stated


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h", type=float, default=0.0)
    ap.add_argument("--delta", type=float, default=0.1)
    args = ap.parse_args()
    print(f"{'r':>8} {'e^2w':>8} {'finite diff':>13} {'without e^2w':>13} {'rel err':>9} {'with e^2w':>13} {'rel err':>9}")
    for frac in (1.0, 0.75, 0.5, 0.25, 0.1):
        r = frac * args.delta
        w = reg.w_from_energy(r, args.h)
        fd = rddot_finite_difference(reg.RegState(r, 0.5 * math.pi, 0.0, w))
        a, b = rddot_stated(r, w), rddot_flow(r, w)
        print(f"{r:8.4f} {math.exp(2 * w):8.4f} {fd:13.6e} {a:13.6e} {abs(a - fd) / fd:9.2e} {b:13.6e} {abs(b - fd) / fd:9.2e}")


if __name__ == "__main__":
    main()
