"""Profile the stratum coefficients over a family of cone angles.

For a codimension-1 stratum the log coefficient has the closed form
-volume * n * rk_e / (2 sqrt(2 - 2 cos(angle))); the constant coefficient
comes out of the regularized Mellin transform with its error estimate.
"""

import argparse
import math

from rstorsion.orbifold import StratumData, c_j_closed, gamma_j0, kappa_j0_with_error


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--orders", type=int, nargs="*", default=[2, 3, 4, 6])
    parser.add_argument("--n", type=int, default=1)
    parser.add_argument("--rk-e", type=int, default=1)
    args = parser.parse_args()

    print(f"{'m':>3} {'angle':>10} {'gamma_0':>12} {'kappa_0':>14} {'kappa err':>11}")
    for m in args.orders:
        angle = 2.0 * math.pi / m
        stratum = StratumData(
            n_j=args.n - 1, m_j=m, theta_j=0.0, angles=(angle,), volume=1.0
        )
        gamma = gamma_j0(stratum, args.n, args.rk_e)
        kappa, err = kappa_j0_with_error(stratum, args.n, args.rk_e)
        half_closed = 0.5 * c_j_closed(stratum, args.n, args.rk_e)
        assert abs(gamma - half_closed) < 1e-12
        print(f"{m:>3} {angle:>10.6f} {gamma:>12.8f} {kappa:>14.10f} {err:>11.2e}")


if __name__ == "__main__":
    main()
