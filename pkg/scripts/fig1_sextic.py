"""Potential and solvable states of the sextic oscillator for N = 1 and N = 2.

Writes plot_data.csv (columns N,state,E,x,V_re,V_im,phi_re,phi_im, with phi
magnified) and prints energies, norms and node counts.

    python3 scripts/fig1_sextic.py --a 1 --b 1 --out fig1
"""

import argparse
import os

import numpy as np

from prepot.cli import CSV_FMT, plot_data


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--b", type=float, default=1.0)
    ap.add_argument("--magnify", type=float, default=10.0)
    ap.add_argument("--out", default="fig1")
    args = ap.parse_args()

    table, summary = plot_data("sextic", {"a": args.a, "b": args.b}, None, args.magnify)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "plot_data.csv")
    np.savetxt(path, table, fmt=CSV_FMT, delimiter=",", header="N,state,E,x,V_re,V_im,phi_re,phi_im", comments="")
    print(f"{'N':>2} {'state':>5} {'E':>22} {'norm':>12} {'nodes':>5}")
    for s in summary:
        print(f"{s['N']:>2} {s['state']:>5} {s['energy'].real:>22.15f} {s['norm']:>12.9f} {s['nodes']!s:>5}")
    print(f"wrote {path} ({table.shape[0]} rows)")


if __name__ == "__main__":
    main()
