"""Dense mixed-radix state-vector and unitary oracle.

States are stored as flat complex vectors indexed by the carrier digits
(carrier 0 most significant).  All kernels also accept a trailing batch axis so
the same code builds unitaries column-wise and evaluates many states at once.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .circuit import (CircuitError, Entangler, LocalOp, LogicalCircuit, LogicalGate,
                      PhysicalCircuit, PhysicalOp, QloqMap, is_unitary)

MAX_DIM = 2 ** 12
NORM_TOL = 1e-10

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


_ROT = {"rx": rx, "ry": ry, "rz": rz}


def gate_matrix(gate: LogicalGate) -> np.ndarray:
    """Matrix of ``gate`` on its own qubits, ordered as ``gate.qubits``."""
    k = gate.kind
    if k in _ROT:
        return _ROT[k](gate.params[0])
    if k == "x":
        return _X.copy()
    if k == "h":
        return _H.copy()
    if k == "swap":
        return np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    if k == "opaque-unitary":
        return np.array(gate.matrix)
    # multi-controlled X / Z
    nc = len(gate.controls)
    m = np.eye(2 ** (nc + 1), dtype=complex)
    on = 0
    for i, c in enumerate(gate.controls):
        if c not in gate.negated_controls:
            on |= 1 << (nc - i)
    if k == "mcx":
        m[[on, on + 1]] = m[[on + 1, on]]
    else:
        m[on + 1, on + 1] = -1
    return m


# ---------------------------------------------------------------------------
# kernels on arrays of shape (dim,) or (dim, batch)

def _as_tensor(vec: np.ndarray, dims: tuple[int, ...]) -> np.ndarray:
    return vec.reshape(dims + vec.shape[1:])


def apply_matrix_axes(vec: np.ndarray, dims: tuple[int, ...], axes: tuple[int, ...],
                      matrix: np.ndarray) -> np.ndarray:
    """Apply ``matrix`` to the tensor factors ``axes`` (big-endian among them)."""
    t = _as_tensor(vec, dims)
    sub = tuple(dims[a] for a in axes)
    m = matrix.reshape(sub + sub)
    k = len(axes)
    out = np.tensordot(m, t, axes=(tuple(range(k, 2 * k)), axes))
    out = np.moveaxis(out, tuple(range(k)), axes)
    return out.reshape(vec.shape)


def apply_entangler_inplace(vec: np.ndarray, levels: tuple[int, ...], op: Entangler) -> None:
    t = _as_tensor(vec, levels)
    s0 = [slice(None)] * t.ndim
    s0[op.control] = op.control_level
    s1 = list(s0)
    s0[op.target] = op.t0
    s1[op.target] = op.t1
    s0, s1 = tuple(s0), tuple(s1)
    if op.flavor == "CX":
        tmp = t[s0].copy()
        t[s0] = t[s1]
        t[s1] = tmp
    else:
        t[s1] *= -1


def apply_physical_op(vec: np.ndarray, levels: tuple[int, ...], op: PhysicalOp) -> np.ndarray:
    if isinstance(op, LocalOp):
        return apply_matrix_axes(vec, levels, (op.carrier,), op.matrix)
    out = vec.copy()
    apply_entangler_inplace(out, levels, op)
    return out


def apply_logical_gate(vec: np.ndarray, num_qubits: int, gate: LogicalGate) -> np.ndarray:
    """Apply a logical gate to a vector in logical qubit order (qubit 0 most significant)."""
    return apply_matrix_axes(vec, (2,) * num_qubits, gate.qubits, gate_matrix(gate))


# ---------------------------------------------------------------------------
# state objects

@dataclass
class MixedRadixState:
    """Owned state over a carrier map.  ``apply_*`` mutate; ``evolved`` copies."""

    map: QloqMap
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != self.map.dim:
            raise CircuitError(f"state length {self.amplitudes.size} does not match map dimension {self.map.dim}")

    @classmethod
    def zero(cls, qmap: QloqMap) -> "MixedRadixState":
        v = np.zeros(qmap.dim, dtype=complex)
        v[0] = 1
        return cls(qmap, v)

    @classmethod
    def from_bits(cls, qmap: QloqMap, bits: str) -> "MixedRadixState":
        """Computational basis state from a logical bitstring (qubit 0 first)."""
        if len(bits) != qmap.num_qubits or set(bits) - {"0", "1"}:
            raise CircuitError(f"bad bitstring {bits!r}")
        idx = int("".join(bits[q] for q in qmap.order), 2)
        v = np.zeros(qmap.dim, dtype=complex)
        v[idx] = 1
        return cls(qmap, v)

    @classmethod
    def from_logical(cls, qmap: QloqMap, vec: np.ndarray) -> "MixedRadixState":
        return cls(qmap, logical_to_physical(np.asarray(vec, dtype=complex), qmap))

    def copy(self) -> "MixedRadixState":
        return MixedRadixState(self.map, self.amplitudes.copy())

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def _check_norm(self):
        if abs(self.norm - 1) > NORM_TOL:
            raise CircuitError(f"norm drifted to {self.norm}")

    def apply_local(self, carrier: int, matrix: np.ndarray) -> "MixedRadixState":
        levels = self.map.levels
        matrix = np.asarray(matrix, dtype=complex)
        if not 0 <= carrier < len(levels) or matrix.shape != (levels[carrier],) * 2:
            raise CircuitError(f"matrix of shape {matrix.shape} does not fit carrier {carrier}")
        if not is_unitary(matrix, 1e-10):
            raise CircuitError("local matrix is not unitary")
        self.amplitudes = apply_matrix_axes(self.amplitudes, levels, (carrier,), matrix)
        self._check_norm()
        return self

    def apply_two_level(self, op: Entangler) -> "MixedRadixState":
        PhysicalCircuit(self.map, (op,))  # validates levels against the map
        apply_entangler_inplace(self.amplitudes, self.map.levels, op)
        return self

    def apply(self, op: PhysicalOp) -> "MixedRadixState":
        if isinstance(op, LocalOp):
            return self.apply_local(op.carrier, op.matrix)
        return self.apply_two_level(op)

    def run(self, circuit: PhysicalCircuit) -> "MixedRadixState":
        if circuit.map != self.map:
            raise CircuitError("circuit map differs from state map")
        for op in circuit.ops:
            self.apply(op)
        self.amplitudes = self.amplitudes * np.exp(1j * circuit.global_phase)
        return self

    def evolved(self, circuit: PhysicalCircuit) -> "MixedRadixState":
        return self.copy().run(circuit)

    def logical_vector(self) -> np.ndarray:
        return physical_to_logical(self.amplitudes, self.map)


def apply_local(state: MixedRadixState, carrier: int, matrix: np.ndarray) -> MixedRadixState:
    return state.copy().apply_local(carrier, matrix)


def apply_two_level(state: MixedRadixState, op: Entangler) -> MixedRadixState:
    return state.copy().apply_two_level(op)


# ---------------------------------------------------------------------------
# basis permutation between carrier order and logical order

def _order_perm(qmap: QloqMap) -> tuple[int, ...] | None:
    order = qmap.order
    return None if order == tuple(sorted(order)) else order


def physical_to_logical(vec: np.ndarray, qmap: QloqMap) -> np.ndarray:
    """Reorder the leading axis from carrier order to logical qubit order."""
    order = _order_perm(qmap)
    if order is None:
        return vec
    n = qmap.num_qubits
    t = vec.reshape((2,) * n + vec.shape[1:])
    src = tuple(order.index(q) for q in range(n))
    return np.moveaxis(t, src, tuple(range(n))).reshape(vec.shape)


def logical_to_physical(vec: np.ndarray, qmap: QloqMap) -> np.ndarray:
    order = _order_perm(qmap)
    if order is None:
        return vec
    n = qmap.num_qubits
    t = vec.reshape((2,) * n + vec.shape[1:])
    return np.moveaxis(t, tuple(range(n)), tuple(order.index(q) for q in range(n))).reshape(vec.shape)


def to_logical_basis(u: np.ndarray, qmap: QloqMap) -> np.ndarray:
    """Conjugate a carrier-order operator into logical qubit order."""
    return physical_to_logical(physical_to_logical(u, qmap).T, qmap).T


# ---------------------------------------------------------------------------
# unitaries

def circuit_unitary(circuit: PhysicalCircuit | LogicalCircuit, logical_order: bool = False) -> np.ndarray:
    """Dense operator of ``circuit``.

    Physical circuits are returned in carrier order unless ``logical_order`` is
    set; logical circuits are always in logical qubit order.
    """
    if isinstance(circuit, LogicalCircuit):
        dim = 2 ** circuit.num_qubits
        if dim > MAX_DIM:
            raise CircuitError(f"dimension {dim} exceeds simulator limit {MAX_DIM}")
        u = np.eye(dim, dtype=complex)
        for g in circuit.gates:
            u = apply_logical_gate(u, circuit.num_qubits, g)
        return u
    levels = circuit.map.levels
    dim = circuit.map.dim
    if dim > MAX_DIM:
        raise CircuitError(f"dimension {dim} exceeds simulator limit {MAX_DIM}")
    u = np.eye(dim, dtype=complex)
    for op in circuit.ops:
        if isinstance(op, LocalOp):
            u = apply_matrix_axes(u, levels, (op.carrier,), op.matrix)
        else:
            apply_entangler_inplace(u, levels, op)
    u *= np.exp(1j * circuit.global_phase)
    return to_logical_basis(u, circuit.map) if logical_order else u


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|tr(A^dagger B)| / dim."""
    if a.shape != b.shape:
        raise CircuitError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(abs(np.vdot(a, b)) / a.shape[0])


def equivalent_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> tuple[bool, float]:
    f = fidelity(a, b)
    return f >= 1 - tol, f


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary (QR of a complex Ginibre matrix with phase fix)."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


# ---------------------------------------------------------------------------
# observables

def purities(vecs: np.ndarray, num_qubits: int) -> np.ndarray:
    """Single-qubit reduced purities for logical-order states.

    ``vecs`` has shape (dim,) or (batch, dim); the result has shape (num_qubits,)
    or (batch, num_qubits).
    """
    single = vecs.ndim == 1
    v = vecs.reshape((1 if single else vecs.shape[0],) + (2,) * num_qubits)
    out = np.empty((v.shape[0], num_qubits))
    for j in range(num_qubits):
        m = np.moveaxis(v, j + 1, 1).reshape(v.shape[0], 2, -1)
        rho = np.einsum("bik,bjk->bij", m, m.conj())
        out[:, j] = np.einsum("bij,bji->b", rho, rho).real
    return out[0] if single else out


def reduced_purity(state: MixedRadixState, j: int) -> float:
    return float(purities(state.logical_vector(), state.map.num_qubits)[j])


def sample(state: MixedRadixState, shots: int, seed: int | None = None) -> dict[str, int]:
    """Multinomial draw of logical bitstrings (qubit 0 first); seeded and deterministic."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = np.abs(state.logical_vector()) ** 2
    probs = probs / probs.sum()
    counts = np.random.default_rng(seed).multinomial(shots, probs)
    n = state.map.num_qubits
    return {format(i, f"0{n}b"): int(c) for i, c in enumerate(counts) if c}


def histogram_csv(hist: dict[str, int]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bitstring", "count"])
    for k in sorted(hist):
        w.writerow([k, hist[k]])
    return buf.getvalue()
