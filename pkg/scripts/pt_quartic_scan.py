"""Scan gamma in the PT-symmetric quartic and report where the QES levels turn complex.

At the exceptional point where two levels coalesce (gamma = -1/4 for
alpha = beta = 1, N = 1) the energies are only accurate to about the square
root of machine precision, so the status there can read "complex (unpaired)".

    python3 scripts/pt_quartic_scan.py --alpha 1 --beta 1 --N 1
"""

import argparse

import numpy as np

from prepot import bae
from prepot.presets import make_preset
from prepot.verify import pt_status


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--N", type=int, default=1)
    ap.add_argument("--gamma-min", type=float, default=-2.0)
    ap.add_argument("--gamma-max", type=float, default=2.0)
    ap.add_argument("--steps", type=int, default=17)
    args = ap.parse_args()

    print(f"{'gamma':>8} {'status':>20}  energies")
    for gamma in np.linspace(args.gamma_min, args.gamma_max, args.steps):
        spec = make_preset("pt-quartic", N=args.N, alpha=args.alpha, beta=args.beta, gamma=float(gamma)).spec
        en = bae.enumerate_solutions(spec)
        text = ", ".join(f"{E.real:.6f}{E.imag:+.6f}j" for E in en.energies)
        status = pt_status(en.energies) if en.complete else "incomplete"
        print(f"{gamma:>8.3f} {status:>20}  {text}")


if __name__ == "__main__":
    main()
