"""Duan value and optimal gain against squeezing for the separable-carrier
distribution protocol, with and without loss on B."""

import argparse

import numpy as np

from cvcorr.protocols import DistributionConfig, run_distribution


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r-max", type=float, default=1.5)
    ap.add_argument("--steps", type=int, default=15)
    ap.add_argument("--eta", type=float, nargs="+", default=[1.0, 0.5])
    args = ap.parse_args()
    print(f"{'eta':>5} {'r':>5} {'g_opt':>8} {'duan':>8} {'A|BC nu':>9} {'C|AB nu':>9}")
    for eta in args.eta:
        for r in np.linspace(args.r_max / args.steps, args.r_max, args.steps):
            tr = run_distribution(DistributionConfig(float(r), eta_b=eta))
            a = tr.stage("after_bs1").cuts["A|BC"].min_nu
            c = min(s.cuts["C|AB"].min_nu for s in tr.stages)
            print(f"{eta:5.2f} {r:5.2f} {tr.g_opt:8.4f} {tr.duan_value:8.4f} {a:9.4f} {c:9.4f}")


if __name__ == "__main__":
    main()
