"""Compare the closed subleading coefficients against the Mellin route on a
batch of random geometries and report the worst deviations."""

import argparse
import random

from rstorsion.heatmodel import GeometricData
from rstorsion.torsion import alpha1_beta1, alpha1_beta1_via_mellin


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=8)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    print(f"{'n':>2} {'rk':>3} {'alpha1 closed':>15} {'alpha1 dev':>12} {'beta1 dev':>12}")
    worst_a = worst_b = 0.0
    for _ in range(args.count):
        geom = GeometricData(
            n=rng.randint(1, 4),
            rk_e=rng.randint(1, 3),
            vol=rng.uniform(0.2, 3.0),
            int_c1tm=rng.uniform(-6.0, 6.0),
            int_c1e=rng.uniform(-3.0, 3.0),
            log_det_integral=rng.uniform(-1.0, 1.0),
        )
        a_closed, b_closed = alpha1_beta1(geom)
        route = alpha1_beta1_via_mellin(geom)
        dev_a = abs(route.alpha1 - a_closed)
        dev_b = abs(route.beta1 - b_closed)
        worst_a = max(worst_a, dev_a)
        worst_b = max(worst_b, dev_b)
        print(f"{geom.n:>2} {geom.rk_e:>3} {a_closed:>15.8f} {dev_a:>12.2e} {dev_b:>12.2e}")
    print(f"\nworst: alpha1 {worst_a:.2e}, beta1 {worst_b:.2e}")


if __name__ == "__main__":
    main()
