"""Compare the two quadrature phase conventions for homodyne post-selection.

    python3 scripts/convention_report.py --alpha 0.8 --phi 1.0472

Prints Im n_W from both conventions next to the closed forms, showing that
the standard one (e^{-i n phi}) gives the negated imaginary part.
"""
import argparse
import math

import numpy as np

from weakconc import hilbert, weak_values
from weakconc.hilbert import Cutoff, QuadratureFunctional


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=0.8)
    ap.add_argument("--phi", type=float, default=math.pi / 3)
    args = ap.parse_args()
    a, phi = args.alpha, args.phi
    ket = hilbert.coherent_fock(a, Cutoff(60, 1e-16))
    print(f"alpha={a} phi={phi:.4f}; success boundary x = sqrt2 alpha cos(phi) = {math.sqrt(2) * a * math.cos(phi):.4f}")
    print(f"{'x':>6} {'Im std':>11} {'Im conj':>11} {'closed conj':>12}")
    for x in np.linspace(-1.0, 2.0, 7):
        im = {c: weak_values.weak_value_numeric(ket, QuadratureFunctional(x, phi, c)).imag
              for c in hilbert.CONVENTIONS}
        closed = math.sqrt(2) * a * math.sin(phi) * x - a * a * math.sin(2 * phi)
        print(f"{x:6.2f} {im[hilbert.STANDARD]:11.6f} {im[hilbert.CONJUGATE]:11.6f} {closed:12.6f}")


if __name__ == "__main__":
    main()
