"""Variational eigensolver: Pauli Hamiltonians, expectation estimators, derivative-free loop."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .metrics import ParameterizedAnsatz, batch_states

_PAULI = set("IXYZ")


@dataclass(frozen=True)
class PauliHamiltonian:
    terms: tuple[tuple[float, str], ...]
    groups: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if not self.terms:
            raise ValueError("Hamiltonian has no terms")
        n = len(self.terms[0][1])
        for c, p in self.terms:
            if len(p) != n:
                raise ValueError(f"inconsistent Pauli string length: {p!r} vs {n}")
            if set(p) - _PAULI or not p:
                raise ValueError(f"malformed Pauli string {p!r}")
        if not self.groups:
            object.__setattr__(self, "groups", greedy_groups([p for _, p in self.terms]))

    @property
    def num_qubits(self) -> int:
        return len(self.terms[0][1])

    def group_basis(self, k: int) -> str:
        basis = ["I"] * self.num_qubits
        for i in self.groups[k]:
            for q, ch in enumerate(self.terms[i][1]):
                if ch != "I":
                    basis[q] = ch
        return "".join(basis)

    def matrix(self) -> np.ndarray:
        mats = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]), "Y": np.array([[0, -1j], [1j, 0]]),
                "Z": np.diag([1, -1])}
        h = 0
        for c, p in self.terms:
            m = np.array([[1.0]])
            for ch in p:
                m = np.kron(m, mats[ch])
            h = h + c * m
        return np.asarray(h, dtype=complex)

    def ground_energy(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix())[0])


def _compatible(a: str, b: str) -> bool:
    return all(x == "I" or y == "I" or x == y for x, y in zip(a, b))


def greedy_groups(paulis: Sequence[str]) -> tuple[tuple[int, ...], ...]:
    """First-fit grouping of terms into sets measurable in one tensor-product basis."""
    groups: list[list[int]] = []
    bases: list[list[str]] = []
    for i, p in enumerate(paulis):
        for grp, basis in zip(groups, bases):
            if _compatible(p, "".join(basis)):
                grp.append(i)
                for q, ch in enumerate(p):
                    if ch != "I":
                        basis[q] = ch
                break
        else:
            groups.append([i])
            bases.append(list(p))
    return tuple(tuple(g) for g in groups)


def parse_hamiltonian(document: str) -> PauliHamiltonian:
    """JSON-lines of {"coeff": float, "pauli": "XZIY"}; blank lines are skipped."""
    terms = []
    for lineno, line in enumerate(document.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            d = json.loads(line)
            terms.append((float(d["coeff"]), str(d["pauli"]).upper()))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return PauliHamiltonian(tuple(terms))


# ---------------------------------------------------------------------------
# expectation values

def _state(ansatz: ParameterizedAnsatz, params, input_bits: str | None) -> np.ndarray:
    return batch_states(ansatz, np.asarray(params, dtype=float)[None, :], input_bits)[0]


def pauli_expectation(psi: np.ndarray, pauli: str) -> float:
    n = len(pauli)
    idx = np.arange(2 ** n)
    flip = 0
    phase = np.ones(2 ** n, dtype=complex)
    for q, ch in enumerate(pauli):
        bit = (idx >> (n - 1 - q)) & 1
        if ch in "XY":
            flip |= 1 << (n - 1 - q)
        if ch == "Z":
            phase *= 1 - 2 * bit
        elif ch == "Y":
            # Y|b> = i(-1)^b |1-b>; phase keyed by the input bit
            phase *= 1j * (1 - 2 * bit)
    out = np.zeros_like(psi)
    out[idx ^ flip] = phase * psi
    return float(np.vdot(psi, out).real)


def expectation_exact(ansatz: ParameterizedAnsatz, params, h: PauliHamiltonian,
                      input_bits: str | None = None) -> float:
    psi = _state(ansatz, params, input_bits)
    return float(sum(c * pauli_expectation(psi, p) for c, p in h.terms))


_HAD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
_ROT = {"X": _HAD, "Y": _HAD @ np.diag([1, -1j])}


def _rotate_to_basis(psi: np.ndarray, basis: str) -> np.ndarray:
    n = len(basis)
    t = psi.reshape((2,) * n)
    for q, ch in enumerate(basis):
        if ch in _ROT:
            t = np.moveaxis(np.tensordot(_ROT[ch], t, axes=(1, q)), 0, q)
    return t.reshape(-1)


def expectation_sampled(ansatz: ParameterizedAnsatz, params, h: PauliHamiltonian, shots_per_group: int,
                        seed: int | None = None, input_bits: str | None = None) -> tuple[float, float]:
    """Shot estimate and its standard error; each group is measured in its own rotated basis."""
    if shots_per_group < 1:
        raise ValueError("shots must be >= 1")
    psi = _state(ansatz, params, input_bits)
    rng = np.random.default_rng(seed)
    n = h.num_qubits
    idx = np.arange(2 ** n)
    energy, var = 0.0, 0.0
    for k, grp in enumerate(h.groups):
        probs = np.abs(_rotate_to_basis(psi, h.group_basis(k))) ** 2
        counts = rng.multinomial(shots_per_group, probs / probs.sum())
        value = np.zeros(2 ** n)
        for i in grp:
            c, p = h.terms[i]
            mask = sum(1 << (n - 1 - q) for q, ch in enumerate(p) if ch != "I")
            parity = np.array([bin(v).count("1") & 1 for v in (idx & mask)])
            value += c * (1 - 2 * parity)
        mean = float(counts @ value) / shots_per_group
        energy += mean
        if shots_per_group > 1:
            var += float(counts @ (value - mean) ** 2) / (shots_per_group - 1) / shots_per_group
    return energy, math.sqrt(var)


# ---------------------------------------------------------------------------
# optimization

@dataclass
class TraceRow:
    params: np.ndarray
    energy: float
    stderr: float = 0.0
    shots: int = 0


@dataclass
class VqeTrace:
    iterations: list[TraceRow] = field(default_factory=list)
    converged: bool = False

    @property
    def best_index(self) -> int:
        return int(np.argmin([r.energy for r in self.iterations]))

    @property
    def best_energy(self) -> float:
        return self.iterations[self.best_index].energy

    @property
    def best_params(self) -> np.ndarray:
        return self.iterations[self.best_index].params

    def best_so_far(self) -> np.ndarray:
        return np.minimum.accumulate([r.energy for r in self.iterations])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "energy", "stderr", "best"])
        for i, (r, b) in enumerate(zip(self.iterations, self.best_so_far())):
            w.writerow([i, f"{r.energy:.12g}", f"{r.stderr:.6g}", f"{b:.12g}"])
        return buf.getvalue()


class _Stop(Exception):
    pass


METHODS = {"simplex": "Nelder-Mead", "nelder-mead": "Nelder-Mead", "trust-region": "COBYQA",
           "cobyqa": "COBYQA", "cobyla": "COBYLA"}


@dataclass(frozen=True)
class OptimizerConfig:
    method: str = "cobyqa"
    budget: int = 2000
    tol: float = 1e-6
    patience: int = 25
    seed: int = 0


def minimize(objective: Callable[[np.ndarray], float | tuple[float, float]], x0: Sequence[float],
             config: OptimizerConfig = OptimizerConfig()) -> tuple[np.ndarray, float, VqeTrace]:
    """Derivative-free local search with an evaluation budget and a stall-based stop.

    Stops once the best value has improved by less than ``tol`` over the last
    ``patience`` evaluations, or when ``budget`` evaluations have been spent.
    COBYLA runs in compiled code that cannot be interrupted cleanly, so for it the
    stall rule is not applied and its own tolerance ends the run.
    """
    if config.budget < 1:
        raise ValueError("budget must be >= 1")
    if config.method not in METHODS:
        raise ValueError(f"unknown method {config.method!r}; choose from {sorted(METHODS)}")
    trace = VqeTrace()
    best: list[float] = []

    def wrapped(x):
        if len(trace.iterations) >= config.budget:
            if not interruptible:
                return trace.iterations[-1].energy
            raise _Stop
        out = objective(np.array(x, dtype=float))
        val, err = (out if isinstance(out, tuple) else (out, 0.0))
        trace.iterations.append(TraceRow(np.array(x, dtype=float), float(val), float(err)))
        best.append(min(best[-1], val) if best else val)
        k = config.patience
        if interruptible and len(best) > k and best[-k - 1] - best[-1] < config.tol:
            trace.converged = True
            raise _Stop
        return val

    x0 = np.asarray(x0, dtype=float)
    method = METHODS[config.method]
    interruptible = method != "COBYLA"
    opts = {"Nelder-Mead": {"maxfev": config.budget, "xatol": 1e-10, "fatol": 1e-12},
            "COBYQA": {"maxfev": config.budget, "initial_tr_radius": 0.5, "final_tr_radius": 1e-8},
            "COBYLA": {"maxiter": config.budget, "rhobeg": 0.5, "tol": 1e-8}}[method]
    try:
        _scipy_minimize(wrapped, x0, method=method, options=opts)
        trace.converged = True
    except _Stop:
        pass
    if not trace.iterations:
        raise ValueError("optimizer made no evaluations")
    return trace.best_params, trace.best_energy, trace


def vqe_run(ansatz: ParameterizedAnsatz, h: PauliHamiltonian, config: OptimizerConfig = OptimizerConfig(),
            input_bits: str | None = None, shots: int | None = None,
            x0: Sequence[float] | None = None) -> VqeTrace:
    """Exact mode when ``shots`` is None, otherwise shot-sampled with per-evaluation seeds."""
    if ansatz.num_qubits != h.num_qubits:
        raise ValueError(f"ansatz has {ansatz.num_qubits} qubits, Hamiltonian {h.num_qubits}")
    rng = np.random.default_rng(config.seed)
    if x0 is None:
        x0 = rng.uniform(-0.1, 0.1, ansatz.param_count)
    counter = [0]

    def objective(x):
        if shots is None:
            return expectation_exact(ansatz, x, h, input_bits)
        counter[0] += 1
        return expectation_sampled(ansatz, x, h, shots, config.seed * 1_000_003 + counter[0], input_bits)

    _, _, trace = minimize(objective, x0, config)
    if shots is not None:
        for r in trace.iterations:
            r.shots = shots * len(h.groups)
    return trace
