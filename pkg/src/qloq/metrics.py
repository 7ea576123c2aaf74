"""Expressibility and entangling capability of parameterized ansatze."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import LogicalCircuit, LogicalGate, QloqMap
from .lowering import lower_circuit
from .sim import gate_matrix, purities

BINS = 75
_ROT_KINDS = ("rx", "ry", "rz")


@dataclass(frozen=True)
class ParameterizedAnsatz:
    """Template circuit whose rotation gates are the parameter slots, in gate order."""

    name: str
    base: LogicalCircuit
    map: QloqMap

    @property
    def num_qubits(self) -> int:
        return self.base.num_qubits

    @property
    def param_count(self) -> int:
        return sum(g.kind in _ROT_KINDS for g in self.base.gates)

    def bind(self, params: Sequence[float]) -> LogicalCircuit:
        params = list(params)
        if len(params) != self.param_count:
            raise ValueError(f"{self.name} takes {self.param_count} params, got {len(params)}")
        it = iter(params)
        gates = [g.with_params((next(it),)) if g.kind in _ROT_KINDS else g for g in self.base.gates]
        return LogicalCircuit(self.num_qubits, tuple(gates))

    @property
    def entanglers(self) -> int:
        return lower_circuit(self.bind(np.zeros(self.param_count)), self.map).entangler_count

    @property
    def product_only(self) -> bool:
        """True when no gate touches more than one qubit, so every output is a product state."""
        return all(g.arity == 1 for g in self.base.gates)


def _batched_rotation(kind: str, theta: np.ndarray) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    m = np.zeros(theta.shape + (2, 2), dtype=complex)
    if kind == "rx":
        m[..., 0, 0] = m[..., 1, 1] = c
        m[..., 0, 1] = m[..., 1, 0] = -1j * s
    elif kind == "ry":
        m[..., 0, 0] = m[..., 1, 1] = c
        m[..., 0, 1], m[..., 1, 0] = -s, s
    else:
        m[..., 0, 0], m[..., 1, 1] = np.exp(-0.5j * theta), np.exp(0.5j * theta)
    return m


def batch_states(ansatz: ParameterizedAnsatz, params: np.ndarray, input_bits: str | None = None) -> np.ndarray:
    """Output states (logical order) for a (batch, param_count) array of bindings."""
    params = np.atleast_2d(params)
    b = params.shape[0]
    n = ansatz.num_qubits
    psi = np.zeros((b,) + (2,) * n, dtype=complex)
    idx = (slice(None),) + tuple(int(c) for c in (input_bits or "0" * n))
    psi[idx] = 1
    p = 0
    for g in ansatz.base.gates:
        if g.kind in _ROT_KINDS:
            m = _batched_rotation(g.kind, params[:, p])
            p += 1
            ax = g.target[0] + 1
            psi = np.moveaxis(np.einsum("bij,bj...->bi...", m, np.moveaxis(psi, ax, 1)), 1, ax)
        else:
            k = g.arity
            axes = tuple(q + 1 for q in g.qubits)
            m = gate_matrix(g).reshape((2,) * (2 * k))
            psi = np.tensordot(m, psi, axes=(tuple(range(k, 2 * k)), axes))
            psi = np.moveaxis(psi, tuple(range(k)), axes)
    return psi.reshape(b, 2 ** n)


def haar_bin_probs(d: int, bins: int = BINS) -> np.ndarray:
    """Haar fidelity mass per bin: (1 - F_j)^(d-1) - (1 - F_{j+1})^(d-1)."""
    if d < 2:
        raise ValueError("d must be >= 2")
    edges = np.arange(bins + 1) / bins
    tail = (1 - edges) ** (d - 1)
    return tail[:-1] - tail[1:]


def fidelity_histogram(f: np.ndarray, bins: int = BINS) -> np.ndarray:
    counts, _ = np.histogram(np.clip(f, 0, 1), bins=bins, range=(0, 1))
    return counts


def kl_to_haar(f: np.ndarray, d: int, bins: int = BINS) -> float:
    counts = fidelity_histogram(f, bins)
    ph = counts / counts.sum()
    q = haar_bin_probs(d, bins)
    nz = ph > 0
    return float(np.sum(ph[nz] * np.log(ph[nz] / q[nz])))


def _uniform_params(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.uniform(0, 2 * np.pi, size=shape)


def pair_fidelities(ansatz: ParameterizedAnsatz, pairs: int, seed: int | None = None,
                    chunk: int = 2500) -> np.ndarray:
    rng = np.random.default_rng(seed)
    out = []
    for start in range(0, pairs, chunk):
        b = min(chunk, pairs - start)
        th = _uniform_params(rng, (2, b, ansatz.param_count))
        a = batch_states(ansatz, th[0])
        c = batch_states(ansatz, th[1])
        out.append(np.abs(np.einsum("bi,bi->b", a.conj(), c)) ** 2)
    return np.concatenate(out) if out else np.empty(0)


def expressibility(ansatz: ParameterizedAnsatz, sample_pairs: int = 5000, bins: int = BINS,
                   seed: int | None = None) -> float:
    f = pair_fidelities(ansatz, sample_pairs, seed)
    return kl_to_haar(f, 2 ** ansatz.num_qubits, bins)


def haar_expressibility(num_qubits: int, sample_pairs: int = 5000, bins: int = BINS,
                        seed: int | None = None) -> float:
    """Expressibility of exactly Haar-random states; its finite-sample floor."""
    rng = np.random.default_rng(seed)
    d = 2 ** num_qubits
    z = rng.standard_normal((2, sample_pairs, d)) + 1j * rng.standard_normal((2, sample_pairs, d))
    z /= np.linalg.norm(z, axis=2, keepdims=True)
    f = np.abs(np.einsum("bi,bi->b", z[0].conj(), z[1])) ** 2
    return kl_to_haar(f, d, bins)


def meyer_wallach(vec: np.ndarray, num_qubits: int | None = None) -> float | np.ndarray:
    """Q = 2 (1 - mean single-qubit purity) for logical-order states (batched on axis 0)."""
    vec = np.asarray(vec)
    n = num_qubits or int(round(np.log2(vec.shape[-1])))
    pur = purities(vec, n)
    q = 2 * (1 - pur.mean(axis=-1))
    return np.clip(q, 0.0, 1.0)


def entangling_capability(ansatz: ParameterizedAnsatz, samples: int = 1000, seed: int | None = None) -> float:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if ansatz.product_only:
        return 0.0
    rng = np.random.default_rng(seed)
    psi = batch_states(ansatz, _uniform_params(rng, (samples, ansatz.param_count)))
    return float(np.mean(meyer_wallach(psi, ansatz.num_qubits)))


@dataclass(frozen=True)
class BenchmarkRow:
    id: str
    entanglers: int
    params: int
    expr: float
    ent: float


def benchmark_sweep(ansatze: Sequence[ParameterizedAnsatz], pairs: int = 5000, samples: int = 1000,
                    seed: int = 0) -> list[BenchmarkRow]:
    rows = []
    for i, a in enumerate(ansatze):
        rows.append(BenchmarkRow(a.name, a.entanglers, a.param_count,
                                 expressibility(a, pairs, seed=seed + 2 * i),
                                 entangling_capability(a, samples, seed=seed + 2 * i + 1)))
    return rows


def benchmark_csv(rows: Sequence[BenchmarkRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "entanglers", "params", "expr", "ent"])
    for r in rows:
        w.writerow([r.id, r.entanglers, r.params, f"{r.expr:.6f}", f"{r.ent:.6f}"])
    return buf.getvalue()


def bootstrap_stderr(ansatz: ParameterizedAnsatz, pairs: int = 5000, resamples: int = 200,
                     seed: int = 0) -> float:
    """Bootstrap standard error of the expressibility estimate."""
    f = pair_fidelities(ansatz, pairs, seed)
    rng = np.random.default_rng(seed + 1)
    d = 2 ** ansatz.num_qubits
    vals = [kl_to_haar(f[rng.integers(0, len(f), len(f))], d) for _ in range(resamples)]
    return float(np.std(vals, ddof=1))
