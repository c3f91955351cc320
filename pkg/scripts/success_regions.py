"""Locate success-region boundaries (sign changes of Im n_W) for the three schemes.

    python3 scripts/success_regions.py [--step 1e-3] [--jobs 4]
"""
import argparse
import math

from weakconc import sweep
from weakconc.scenario import Axis, Scenario

SCHEMES = {
    "coherent": ({"scheme": "coherent", "alpha": 1.0}, {"scheme": "coherent", "alpha": 1.0},
                 "ancilla.post.phi", 0.0, 2 * math.pi, lambda: [math.pi]),
    "quadrature": ({"scheme": "coherent", "alpha": 0.8}, {"scheme": "quadrature", "x": 0.0, "phi": math.pi / 3},
                   "ancilla.post.x", -1.5, 2.5, lambda: [math.sqrt(2) * 0.8 * math.cos(math.pi / 3)]),
    "squeezed": ({"scheme": "coherent", "alpha": 0.8}, {"scheme": "squeezed", "r": 0.6},
                 "ancilla.post.phi", -math.pi / 2, 1.5 * math.pi, lambda: [0.0, math.pi]),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--step", type=float, default=1e-3)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    for name, (pre, post, axis, lo, hi, expected) in SCHEMES.items():
        steps = int(math.ceil((hi - lo) / args.step)) + 1
        doc = {"protocol": {"lambda": 0.5, "kappa_T": 0.05}, "ancilla": {"pre": pre, "post": post},
               "numerics": {"n_max": 40, "ancilla_n_max": 40}}
        sc = Scenario(doc, (Axis(axis, lo, hi, steps),))
        rows = sweep.run_sweep(sc, jobs=args.jobs)
        found = sweep.flag_boundaries([r[axis] for r in rows], [r["success"] for r in rows])
        print(f"{name:<11} {axis:<17} boundaries {[round(float(b), 4) for b in found]}"
              f"  expected {[round(e, 4) for e in expected()]}")


if __name__ == "__main__":
    main()
