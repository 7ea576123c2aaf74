"""Expressibility and entangling capability of the benchmark ansatze next to the reference values."""

import argparse

from qloq.fixtures import BENCHMARK_SET, REFERENCE_METRICS, builtin_ansatz
from qloq.metrics import bootstrap_stderr, entangling_capability, expressibility

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--pairs", type=int, default=5000)
p.add_argument("--samples", type=int, default=1000)
p.add_argument("--seed", type=int, default=0)
p.add_argument("--stderr", action="store_true", help="add a bootstrap standard error for Expr")
args = p.parse_args()

print("id,entanglers,params,expr,ent,ref_expr,ref_ent" + (",expr_se" if args.stderr else ""))
for name in BENCHMARK_SET:
    a = builtin_ansatz(name)
    expr = expressibility(a, args.pairs, seed=args.seed)
    ent = entangling_capability(a, args.samples, seed=args.seed)
    _, _, ref_expr, ref_ent = REFERENCE_METRICS[name]
    line = f"{name},{a.entanglers},{a.param_count},{expr:.4f},{ent:.4f},{ref_expr:.4f},{ref_ent:.4f}"
    if args.stderr:
        line += f",{bootstrap_stderr(a, args.pairs, seed=args.seed):.4f}"
    print(line)
