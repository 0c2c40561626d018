"""Tabulate the drift integral G(phi0) as phi0 -> 0 and compare with 1/ln(1/phi0) decay.

    python3 scripts/scan_drift.py --h 0 --delta 0.1 --kmax 8
"""
import argparse
import math

from logblock.block import drift_by_quadrature, g_scan, make_block, richardson_limit


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h", type=float, default=0.0)
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--kmax", type=int, default=8,
                    help="integrate down to phi0 = 10^-kmax; below 1e-9 block_map uses the extension value")
    ap.add_argument("--deep", type=float, nargs="*", default=[-50.0, -1e2, -1e3, -1e4, -1e5, -1e6, -1e7],
                    help="ln(phi0) values handled by quadrature only")
    args = ap.parse_args()
    block = make_block(args.h, args.delta)
    phis = [10.0 ** -k for k in range(1, args.kmax + 1)]
    rows = sorted(g_scan(block, phis), key=lambda r: -r.phi0)
    print(f"{'ln phi0':>12} {'G (flow)':>14} {'G (quadrature)':>16} {'1/G':>10} {'model x':>10}")
    for r in rows:
        lp = math.log(r.phi0)
        quad_g = drift_by_quadrature(block, math.log(math.sin(r.phi0)))
        x = 1.0 / (-lp + 1.0 / args.delta**2)
        print(f"{lp:12.4g} {r.G:14.8g} {quad_g:16.8g} {1.0 / r.G:10.4f} {x:10.3e}")
    for lp in args.deep:
        quad_g = drift_by_quadrature(block, lp)
        print(f"{lp:12.4g} {'':>14} {quad_g:16.8g} {1.0 / quad_g:10.4g}")
    lim = richardson_limit([r.phi0 for r in rows], [r.G for r in rows], args.delta)
    print(f"Richardson limit from the two smallest angles: {lim:.4g} (bound 2 delta^2 = {2 * args.delta**2:g})")


if __name__ == "__main__":
    main()
