"""Exact and shot-sampled VQE on a two-qubit Hamiltonian with a general two-qubit ansatz."""

import argparse

from qloq.circuit import LogicalCircuit, QloqMap, cx, rot
from qloq.metrics import ParameterizedAnsatz
from qloq.vqe import OptimizerConfig, PauliHamiltonian, expectation_exact, expectation_sampled, vqe_run

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--optimizer", default="cobyqa")
p.add_argument("--seed", type=int, default=0)
p.add_argument("--shots", type=int, default=100_000)
args = p.parse_args()


def u3(q):
    return [rot("z", q), rot("y", q), rot("z", q)]


gates = u3(0) + u3(1) + [cx(0, 1), rot("y", 0), rot("z", 1), cx(1, 0), rot("y", 0), cx(0, 1)] + u3(0) + u3(1)
ansatz = ParameterizedAnsatz("su4", LogicalCircuit(2, tuple(gates)), QloqMap.single(2))
h = PauliHamiltonian(((1.0, "ZZ"), (0.5, "XI"), (0.3, "YY")))

trace = vqe_run(ansatz, h, OptimizerConfig(args.optimizer, seed=args.seed))
exact = expectation_exact(ansatz, trace.best_params, h)
est, se = expectation_sampled(ansatz, trace.best_params, h, args.shots, seed=args.seed)
print(f"ground energy  {h.ground_energy():.8f}")
print(f"vqe best       {trace.best_energy:.8f}  ({len(trace.iterations)} evaluations)")
print(f"sampled        {est:.6f} +- {se:.6f}  (exact {exact:.6f})")
