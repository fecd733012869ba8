"""Recovery error versus relative eigenvalue noise.

    python3 scripts/stability_sweep.py --trials 5 --seed 0
"""

import argparse

import numpy as np

from rod_hearing import FasteningConfig, InverseOptions, RodHearingError, forward_spectrum, identify
from rod_hearing.core import duality_distance


def main():
    p = argparse.ArgumentParser(description="recovery error vs relative eigenvalue noise")
    p.add_argument("--a", type=float, nargs=8, default=[1, 2, 1, 1, 3, 4, 1, 1],
                   help="coefficients a1..a8")
    p.add_argument("--levels", type=float, nargs="+", default=[1e-12, 1e-10, 1e-8, 1e-6])
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    cfg = FasteningConfig.from_coefficients(args.a)
    exact = forward_spectrum(cfg, 9).as_array()
    rng = np.random.default_rng(args.seed)
    opts = InverseOptions.noisy()
    print(f"{'noise':>8} {'max error':>10} {'amplif.':>9} failures")
    for eps in args.levels:
        errs, fails = [], 0
        for _ in range(args.trials):
            s = exact * (1 + eps * rng.uniform(-1, 1, exact.size))
            try:
                errs.append(duality_distance(identify(s, opts).primary_config, cfg))
            except RodHearingError:
                fails += 1
        worst = max(errs) if errs else float("nan")
        print(f"{eps:8.0e} {worst:10.2e} {worst / eps:9.2e} {fails}")


if __name__ == "__main__":
    main()
