"""Scan the gap between exact and asymptotic torsion on the projective line.

The scaled residual p * (exact - asymptotic) settles at -5/12, which is the
next coefficient the order-1 table does not carry.
"""

import argparse

from rstorsion.cp1 import cp1_asymptotic, cp1_exact_2logT


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p-max", type=int, default=50_000)
    args = parser.parse_args()

    print(f"{'p':>8}  {'residual':>14}  {'p * residual':>14}")
    p = 500
    while p <= args.p_max:
        residual = cp1_exact_2logT(p) - cp1_asymptotic(p)
        print(f"{p:>8}  {residual:>14.6e}  {p * residual:>14.10f}")
        p *= 2
    print(f"\nreference -5/12 = {-5.0 / 12.0:.10f}")


if __name__ == "__main__":
    main()
