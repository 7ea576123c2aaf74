"""Fraction of random two-qubit-gate circuits that admit a cost-reducing pair, vs gate count."""

import argparse
import sys

from qloq.compress import fraction_sweep, fraction_csv

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--N", type=int, nargs="+", default=[4, 6, 8, 10])
p.add_argument("--max-gates", type=int, default=60)
p.add_argument("--trials", type=int, default=10000)
p.add_argument("--seed", type=int, default=7)
args = p.parse_args()

sys.stdout.write(fraction_csv(fraction_sweep(args.N, args.max_gates, args.trials, args.seed)))
