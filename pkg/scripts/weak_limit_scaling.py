"""How the fidelity deficit and weakness residual scale as kappa_T is halved.

    python3 scripts/weak_limit_scaling.py [--levels 8]

The halving ratio of 1 - F tends to 16 (deficit ~ kappa^4) and that of the
maximum residual to 4 (residual ~ kappa^2).
"""
import argparse
import math

from weakconc import concentration
from weakconc.hilbert import Coherent, Cutoff


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=8)
    ap.add_argument("--n-max", type=int, default=80)
    args = ap.parse_args()
    prev = None
    print(f"{'kappa_T':>10} {'1-F':>12} {'ratio':>7} {'max resid':>12} {'ratio':>7}")
    for i in range(args.levels):
        k = 0.2 / 2 ** i
        cfg = concentration.ProtocolConfig(0.5, k, Coherent(1.0), Coherent(1.0, 1.5 * math.pi),
                                           Cutoff(args.n_max), Cutoff(40))
        res = concentration.run(cfg)
        d, r = 1 - res.fidelity, res.residuals.max_abs
        rd = f"{prev[0] / d:7.2f}" if prev else " " * 7
        rr = f"{prev[1] / r:7.2f}" if prev else " " * 7
        print(f"{k:10.6f} {d:12.4e} {rd} {r:12.4e} {rr}")
        prev = (d, r)


if __name__ == "__main__":
    main()
