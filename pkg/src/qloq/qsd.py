"""Quantum Shannon decomposition in qubit and carrier (QLOQ) modes.

Each recursion level splits a 2^m unitary on its top qubit into
``(A1 + A2) . Ry-multiplexor . (B1 + B2)``; each block-diagonal pair is
demultiplexed into ``(I x V) . Rz-multiplexor . (I x W)``.  Qubit mode stops at
two-qubit blocks (three CNOTs each); QLOQ mode stops when the remaining qubits
are exactly the g qubits of the carrier, where the block is a free local op.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import cossin, schur

from .circuit import CircuitError, Entangler, LocalOp, LogicalGate, PhysicalCircuit, PhysicalOp, QloqMap, cx
from .costs import qsd_cost, remap_cost
from .lowering import bridge_entanglers
from .sim import circuit_unitary, fidelity, ry, rz
from .twoqubit import three_cnot_decompose

_X = np.array([[0, 1], [1, 0]], dtype=complex)


# ---------------------------------------------------------------------------
# cosine-sine decomposition and demultiplexing

@dataclass(frozen=True, eq=False)
class CsdFactors:
    left: tuple[np.ndarray, np.ndarray]
    theta: np.ndarray
    right: tuple[np.ndarray, np.ndarray]

    def middle(self) -> np.ndarray:
        c, s = np.diag(np.cos(self.theta)), np.diag(np.sin(self.theta))
        return np.block([[c, -s], [s, c]])

    def reassemble(self) -> np.ndarray:
        z = np.zeros_like(self.left[0])
        a = np.block([[self.left[0], z], [z, self.left[1]]])
        b = np.block([[self.right[0], z], [z, self.right[1]]])
        return a @ self.middle() @ b


def cosine_sine_decompose(u: np.ndarray) -> CsdFactors:
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    if u.ndim != 2 or d != u.shape[1] or d % 2:
        raise ValueError(f"need an even-dimensional square matrix, got shape {u.shape}")
    m = d // 2
    (a1, a2), theta, (b1, b2) = cossin(u, p=m, q=m, separate=True)
    return CsdFactors((a1, a2), np.asarray(theta), (b1, b2))


def demultiplex(u1: np.ndarray, u2: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(V, d, W) with U1 = V diag(d) W and U2 = V diag(d)^* W.

    The eigenbasis of the normal matrix U1 U2^dagger comes from a complex Schur
    form, which is unitary by construction, so repeated eigenvalues need no
    separate re-orthonormalization.
    """
    if u1.shape != u2.shape:
        raise ValueError("demultiplex needs equally sized blocks")
    t, v = schur(u1 @ u2.conj().T, output="complex")
    d = np.sqrt(np.diag(t))
    d = d / np.abs(d)
    w = (d[:, None] * v.conj().T) @ u2
    return v, d, w


# ---------------------------------------------------------------------------
# multiplexors

@dataclass(frozen=True, eq=False)
class MultiplexorSpec:
    axis: str
    selects: tuple[int, ...]
    target: int
    angles: np.ndarray

    def __post_init__(self):
        if self.axis not in ("Y", "Z"):
            raise ValueError("axis must be Y or Z")
        object.__setattr__(self, "selects", tuple(self.selects))
        a = np.asarray(self.angles, dtype=float)
        if a.shape != (2 ** len(self.selects),):
            raise ValueError(f"need {2 ** len(self.selects)} angles, got {a.shape}")
        object.__setattr__(self, "angles", a)

    def unitary(self) -> np.ndarray:
        """Operator on (target, selects...) with the target most significant."""
        r = ry if self.axis == "Y" else rz
        k = len(self.angles)
        u = np.zeros((2 * k, 2 * k), dtype=complex)
        for j, th in enumerate(self.angles):
            u[np.ix_([j, k + j], [j, k + j])] = r(th)
        return u


def multiplexor_unitary(spec: MultiplexorSpec, num_qubits: int) -> np.ndarray:
    from .sim import apply_matrix_axes
    return apply_matrix_axes(np.eye(2 ** num_qubits, dtype=complex), (2,) * num_qubits,
                             (spec.target,) + spec.selects, spec.unitary())


def mux_angles_solve(theta: np.ndarray, sign_matrix: np.ndarray) -> np.ndarray:
    """Rotation parameters a with theta = S a."""
    s = np.asarray(sign_matrix, dtype=float)
    theta = np.asarray(theta, dtype=float)
    k = s.shape[0]
    gram = s.T @ s
    if np.allclose(gram, k * np.eye(k)):
        return s.T @ theta / k
    if abs(np.linalg.det(s)) < 1e-9:
        raise np.linalg.LinAlgError("sign matrix is singular")
    return np.linalg.solve(s, theta)


# A pattern is a list of ("slot", i) and ("flip", predicate, op-or-None) entries;
# predicate maps a select-state integer to whether the target is flipped.

def _base_pattern(carrier_selects: Sequence[int], qmap: QloqMap | None):
    if not carrier_selects:
        return [("slot",)]
    c = qmap.carrier_of(carrier_selects[0])
    g = len(carrier_selects)
    pat: list = [("flip", lambda j: True, "X")]
    for p in range(2 ** g):
        pat += [("slot",), ("flip", (lambda j, p=p: j % (2 ** g) == p), ("E", c, p))]
    return pat


def _double(pattern, bit: int, ctl):
    flip = ("flip", (lambda j, bit=bit: bool(j >> bit & 1)), ("C", ctl))
    rev = list(reversed(pattern))
    if pattern[-1][0] == "flip" and pattern[-1][2] != "X":
        return pattern[:-1] + [flip] + rev[1:] + [flip]
    return pattern + [flip] + rev + [flip]


def _pattern(spec: MultiplexorSpec, qmap: QloqMap):
    """Toffoli/CNOT pattern: carrier selects form the base, single selects double it."""
    sel = spec.selects
    s = len(sel)
    if qmap.sizes[qmap.carrier_of(spec.target)] != 1:
        raise CircuitError("multiplexor target must sit alone on a two-level carrier")
    multi = sorted({qmap.carrier_of(q) for q in sel if qmap.sizes[qmap.carrier_of(q)] > 1})
    if len(multi) > 1:
        raise CircuitError("multiplexor selects may occupy at most one multi-qubit carrier")
    carrier_sel: list[int] = []
    if multi:
        grp = qmap.partition[multi[0]]
        carrier_sel = [q for q in sel if q in grp]
        # carrier selects must be the whole carrier, in carrier order, at the end of the select list
        if tuple(carrier_sel) != grp or tuple(sel[s - len(grp):]) != grp:
            raise CircuitError("carrier selects must be the full carrier, listed last in carrier order")
    pat = _base_pattern(carrier_sel, qmap)
    singles = sel[: s - len(carrier_sel)]
    for pos in range(len(singles) - 1, -1, -1):
        pat = _double(pat, s - 1 - pos, singles[pos])
    return pat


def _sign_matrix(pattern, s: int) -> np.ndarray:
    slots = [i for i, e in enumerate(pattern) if e[0] == "slot"]
    k = 2 ** s
    sm = np.empty((k, len(slots)))
    for j in range(k):
        flips = [i for i, e in enumerate(pattern) if e[0] == "flip" and e[1](j)]
        if len(flips) % 2:
            raise CircuitError(f"select state {j} sees an odd number of flips")
        for col, i in enumerate(slots):
            sm[j, col] = -1.0 if sum(f > i for f in flips) % 2 else 1.0
    return sm


def mux_to_physical(spec: MultiplexorSpec, qmap: QloqMap, label: str | None = None) -> list[PhysicalOp]:
    """Physical ops (time order) implementing the multiplexor exactly with 2^s entanglers."""
    pat = _pattern(spec, qmap)
    sm = _sign_matrix(pat, len(spec.selects))
    a = mux_angles_solve(spec.angles, sm)
    tc = qmap.carrier_of(spec.target)
    r = ry if spec.axis == "Y" else rz
    ops: list[PhysicalOp] = []
    slot = 0
    for e in pat:
        if e[0] == "slot":
            ops.append(LocalOp(tc, r(a[slot])))
            slot += 1
        elif e[2] == "X":
            ops.append(LocalOp(tc, _X))
        elif e[2][0] == "E":
            ops.append(Entangler(e[2][1], e[2][2], tc, 0, 1, "CX", label))
        else:
            ops.append(Entangler(qmap.carrier_of(e[2][1]), 1, tc, 0, 1, "CX", label))
    return _fuse_locals(ops)


def _fuse_locals(ops: list[PhysicalOp]) -> list[PhysicalOp]:
    out: list[PhysicalOp] = []
    for op in ops:
        if isinstance(op, LocalOp) and out and isinstance(out[-1], LocalOp) and out[-1].carrier == op.carrier:
            out[-1] = LocalOp(op.carrier, op.matrix @ out[-1].matrix)
        else:
            out.append(op)
    return out


# ---------------------------------------------------------------------------
# recursive synthesis

def qsd_map(n: int, mode: str, g: int | None = None) -> QloqMap:
    if mode == "qubit":
        return QloqMap.qubits(n)
    if g is None or not 1 <= g < n:
        raise ValueError(f"qloq mode needs 1 <= g < n, got g={g}, n={n}")
    return QloqMap(tuple((q,) for q in range(n - g)) + (tuple(range(n - g, n)),))


@dataclass
class SynthesisReport:
    entanglers: int
    by_stage: dict = field(default_factory=dict)
    closed_form: int | None = None
    fidelity: float | None = None

    @property
    def matches_closed_form(self) -> bool:
        return self.closed_form is None or self.entanglers == self.closed_form


class _Builder:
    def __init__(self, n: int, mode: str, g: int | None, qmap: QloqMap):
        self.n, self.mode, self.g, self.map = n, mode, g, qmap
        self.ops: list[PhysicalOp] = []
        self.phase = 0.0

    def terminal(self, u: np.ndarray, k: int) -> bool:
        m = self.n - k
        if self.mode == "qubit" and m == 2:
            ops, ph = three_cnot_decompose(u)
            self.phase += ph
            for op in ops:
                if op[0] == "cx":
                    self.ops.append(Entangler(k + op[1], 1, k + op[2], 0, 1, "CX", "kak"))
                else:
                    self.ops.append(LocalOp(k + op[1], op[2]))
            return True
        if self.mode == "qubit" and m == 1:
            self.ops.append(LocalOp(k, u))
            return True
        if self.mode == "qloq" and m == self.g:
            self.ops.append(LocalOp(self.map.num_carriers - 1, u))
            return True
        return False

    def mux(self, axis: str, k: int, angles: np.ndarray, label: str):
        spec = MultiplexorSpec(axis, tuple(range(k + 1, self.n)), k, angles)
        self.ops += mux_to_physical(spec, self.map, label)

    def block_diag(self, u1: np.ndarray, u2: np.ndarray, k: int):
        v, d, w = demultiplex(u1, u2)
        self.run(w, k + 1)
        self.mux("Z", k, -2 * np.angle(d), "mux-rz")
        self.run(v, k + 1)

    def run(self, u: np.ndarray, k: int):
        if self.terminal(u, k):
            return
        f = cosine_sine_decompose(u)
        self.block_diag(*f.right, k)
        self.mux("Y", k, 2 * f.theta, "mux-ry")
        self.block_diag(*f.left, k)


def _check_input(u: np.ndarray) -> int:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("unitary must be square")
    n = int(round(np.log2(u.shape[0])))
    if 2 ** n != u.shape[0]:
        raise ValueError(f"dimension {u.shape[0]} is not a power of two")
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > 1e-9:
        raise ValueError("input is not unitary")
    return n


def synthesize_qsd(u: np.ndarray, mode: str = "qubit", g: int | None = None,
                   verify: bool = True) -> tuple[PhysicalCircuit, SynthesisReport]:
    """Synthesize ``u`` on n qubits; ``mode`` is "qubit" or "qloq" (with carrier size g)."""
    u = np.asarray(u, dtype=complex)
    n = _check_input(u)
    if mode == "qubit":
        if n < 2:
            raise ValueError("qubit mode needs n >= 2")
        closed = qsd_cost(n, "qubit-base", l=2, c_l=3)
    elif mode == "qloq":
        if g is None or not 1 <= g < n:
            raise ValueError(f"qloq mode needs 1 <= g < n, got g={g}, n={n}")
        closed = qsd_cost(n, "qloq", g=g)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    qmap = qsd_map(n, mode, g)
    b = _Builder(n, mode, g, qmap)
    b.run(u, 0)
    pc = PhysicalCircuit(qmap, tuple(b.ops), b.phase)
    rep = SynthesisReport(pc.entangler_count, {"qsd": pc.entangler_count}, closed)
    if verify:
        rep.fidelity = fidelity(circuit_unitary(pc), u)
    return pc, rep


# ---------------------------------------------------------------------------
# remapping between a split (all two-level) encoding and a merged carrier

def remap_map(f: int, lead: int = 0) -> QloqMap:
    """``lead`` single qubits, then an f-slot carrier, then f - 1 single qubits."""
    singles = tuple((q,) for q in range(lead))
    carrier = (tuple(range(lead, lead + f)),)
    extra = tuple((q,) for q in range(lead + f, lead + 2 * f - 1))
    return QloqMap(singles + carrier + extra)


def remap_ops(f: int, direction: str, lead: int = 0) -> list[PhysicalOp]:
    """Merge/split ops on :func:`remap_map`; slot i of the carrier pairs with single f-1+i.

    Each relocation is a CNOT into a |0> slot followed by a CNOT back, and carrier
    slots above the one being moved are known to be |0>, so each CNOT costs 2^i.
    """
    if f < 2:
        raise ValueError("f must be >= 2")
    qmap = remap_map(f, lead)
    slot = lambda i: lead + i
    single = lambda i: lead + f - 1 + i

    def zeros(i):
        return [slot(j) for j in range(i + 1, f)]

    def merge():
        ops = []
        for i in range(1, f):
            ops += bridge_entanglers(cx(single(i), slot(i)), qmap, zeros(i), "remap")
            ops += bridge_entanglers(cx(slot(i), single(i)), qmap, zeros(i), "remap")
        return ops

    def split():
        ops = []
        for i in range(f - 1, 0, -1):
            ops += bridge_entanglers(cx(slot(i), single(i)), qmap, zeros(i), "remap")
            ops += bridge_entanglers(cx(single(i), slot(i)), qmap, zeros(i), "remap")
        return ops

    if direction == "merge":
        return merge()
    if direction == "split":
        return split()
    if direction == "round-trip":
        return merge() + split()
    raise ValueError(f"unknown direction {direction!r}")


def remap_fragment(f: int, direction: str = "round-trip") -> PhysicalCircuit:
    return PhysicalCircuit(remap_map(f), tuple(remap_ops(f, direction)))


def subspace_fidelity(v: np.ndarray, w: np.ndarray, cols: np.ndarray) -> float:
    """|tr(W_S^dagger V_S)| / |S| over the input columns S."""
    return float(abs(np.vdot(w[:, cols], v[:, cols])) / len(cols))


def _remap_expected(u: np.ndarray, n: int, g: int) -> tuple[np.ndarray, np.ndarray]:
    """Target operator on the n + g - 1 wires and the columns with vacant slots at |0>."""
    from .sim import apply_matrix_axes
    total = n + g - 1
    data = tuple(range(n - g + 1)) + tuple(range(n, total))
    w = apply_matrix_axes(np.eye(2 ** total, dtype=complex), (2,) * total, data, u)
    vacant = list(range(n - g + 1, n))
    idx = np.arange(2 ** total)
    ok = np.ones(2 ** total, dtype=bool)
    for q in vacant:
        ok &= (idx >> (total - 1 - q)) & 1 == 0
    return w, idx[ok]


def synthesize_qsd_with_remap(u: np.ndarray, g: int, verify: bool = True) -> tuple[PhysicalCircuit, SynthesisReport]:
    """Merge g qubits onto a carrier, run QLOQ QSD, then split them back out.

    Wires: singles 0..n-g-1, carrier slots n-g..n-1, singles n..n+g-2.  Data qubit
    n-g+i (i >= 1) enters and leaves on wire n-1+i; slots n-g+1..n-1 start and
    end in |0>.
    """
    u = np.asarray(u, dtype=complex)
    n = _check_input(u)
    if not 2 <= g < n:
        raise ValueError(f"remapped synthesis needs 2 <= g < n, got g={g}, n={n}")
    core, rep = synthesize_qsd(u, "qloq", g, verify=False)
    qmap = remap_map(g, lead=n - g)
    merge = remap_ops(g, "merge", lead=n - g)
    split = remap_ops(g, "split", lead=n - g)
    pc = PhysicalCircuit(qmap, tuple(merge) + core.ops + tuple(split), core.global_phase)
    stages = {"remap-in": len(merge), "qsd": core.entangler_count, "remap-out": len(split)}
    rep = SynthesisReport(pc.entangler_count, stages, qsd_cost(n, "qloq", g=g) + remap_cost(g))
    if verify:
        w, cols = _remap_expected(u, n, g)
        rep.fidelity = subspace_fidelity(circuit_unitary(pc), w, cols)
    return pc, rep
