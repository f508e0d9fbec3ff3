"""Approach of mu_m(t) / t^power to its leading coefficient.

Prints the exact moment polynomial for each (m, omega) and the ratio at a few
times, which shows how slowly subleading terms die out near omega = 1.

    python scripts/moment_ratios.py --m 2 4 --omegas 0.3 0.7 1.0
"""

import argparse
from fractions import Fraction

from qswalk.analytic import moment_leading_coefficient, moment_polynomial


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, nargs="+", default=[2, 4])
    ap.add_argument("--omegas", type=str, nargs="+", default=["0.3", "0.7", "1"])
    ap.add_argument("--times", type=float, nargs="+", default=[10, 40, 100, 1000])
    args = ap.parse_args(argv)

    for m in args.m:
        for ws in args.omegas:
            w = Fraction(ws)
            beta = moment_polynomial(m, w)
            coeff, power = moment_leading_coefficient(m, float(w))
            poly = " + ".join(f"{float(b):.6g} t^{k}" for k, b in enumerate(beta) if b)
            print(f"m={m} omega={ws}: mu = {poly}")
            for t in args.times:
                mu = sum(float(b) * t**k for k, b in enumerate(beta))
                print(f"    t={t:g}: ratio/limit = {mu / t**power / coeff:.4f}")


if __name__ == "__main__":
    main()
