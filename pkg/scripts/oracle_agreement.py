"""Agreement between the BAE energies and two independent oracles for the sextic family.

For each (a, b, N) prints the largest deviation from the gauged-matrix
eigenvalues and from the finite-difference spectrum on the full line.

    python3 scripts/oracle_agreement.py --N-max 4
"""

import argparse

import numpy as np

from prepot import bae, oracle
from prepot.model import physical_potential
from prepot.presets import make_preset
from prepot.spectrum import FULL_LINE


def deviation(xs, ys):
    xs, ys = np.asarray(xs, dtype=complex), np.asarray(ys, dtype=complex)
    return float(max(np.min(np.abs(ys - x)) for x in xs))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N-max", type=int, default=4)
    ap.add_argument("--params", default="1,1;1,0;2,3;0.5,-1", help="a,b pairs separated by ';'")
    args = ap.parse_args()

    pairs = [tuple(float(v) for v in item.split(",")) for item in args.params.split(";")]
    print(f"{'a':>5} {'b':>5} {'N':>2} {'found':>5} {'|BAE - gauged|':>15} {'|BAE - FD|':>11}")
    for a, b in pairs:
        for N in range(1, args.N_max + 1):
            spec = make_preset("sextic", N=N, a=a, b=b).spec
            en = bae.enumerate_solutions(spec)
            gauged = oracle.gauged_energies(spec)
            fd = oracle.fd_spectrum(lambda x: physical_potential(spec, x), FULL_LINE, 2 * N + 4)
            print(
                f"{a:>5g} {b:>5g} {N:>2} {len(en):>5} {deviation(en.energies, gauged):>15.2e} "
                f"{deviation(np.real(en.energies), fd):>11.2e}"
            )


if __name__ == "__main__":
    main()
