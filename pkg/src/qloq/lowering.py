"""Lowering of logical gates onto carriers.

Gates supported within one carrier become a single local carrier unitary.
Multi-controlled X/Z gates spanning two carriers become one two-level
entangler per assignment of the uninvolved ("free") qubits on both carriers,
which is the 2^(g_a + g_b - n) count.  Two-control gates spread over three
carriers fall back to the textbook six-CNOT Toffoli network.
"""

from __future__ import annotations

import itertools
from typing import Iterable

import numpy as np

from .circuit import (CircuitError, Entangler, LocalOp, LogicalCircuit, LogicalGate, PhysicalCircuit,
                      PhysicalOp, QloqMap, cx)
from .sim import apply_matrix_axes, gate_matrix

_T = np.diag([1, np.exp(0.25j * np.pi)])
_TDG = _T.conj()


def carrier_matrix(gate: LogicalGate, qmap: QloqMap) -> tuple[int, np.ndarray]:
    """(carrier, L x L matrix) for a gate whose support lies in one carrier."""
    carriers = {qmap.carrier_of(q) for q in gate.qubits}
    if len(carriers) != 1:
        raise CircuitError(f"{gate!r} spans carriers {sorted(carriers)}; synthesize it instead")
    (c,) = carriers
    g = qmap.sizes[c]
    pos = tuple(qmap.locate(q)[1] for q in gate.qubits)
    m = apply_matrix_axes(np.eye(2 ** g, dtype=complex), (2,) * g, pos, gate_matrix(gate))
    return c, m


def embed_logical_gate(gate: LogicalGate, qmap: QloqMap) -> list[PhysicalOp]:
    """Local-only embedding; raises when the gate needs inter-carrier entanglers."""
    c, m = carrier_matrix(gate, qmap)
    return [LocalOp(c, m)]


def _level(qmap: QloqMap, carrier: int, bits: dict[int, int]) -> int:
    lvl = 0
    for q, b in bits.items():
        if b:
            lvl |= qmap.bit_weight(q)
    return lvl


def bridge_entanglers(gate: LogicalGate, qmap: QloqMap, zero_qubits: Iterable[int] = (),
                      label: str | None = None) -> list[Entangler]:
    """Entanglers realizing a multi-controlled X/Z whose support spans exactly two carriers.

    ``zero_qubits`` lists free qubits known to be |0>; their |1> branch is skipped,
    so the result is exact only on that subspace.
    """
    if gate.kind not in ("mcx", "mcz"):
        raise CircuitError(f"bridge lowering handles mcx/mcz, not {gate.kind}")
    (tq,) = gate.target
    tc = qmap.carrier_of(tq)
    carriers = {qmap.carrier_of(q) for q in gate.qubits}
    if len(carriers) != 2:
        raise CircuitError(f"{gate!r} does not span exactly two carriers")
    (cc,) = carriers - {tc}
    zero = set(zero_qubits)
    need = {q: 0 if q in gate.negated_controls else 1 for q in gate.controls}

    def assignments(carrier):
        free = [q for q in qmap.partition[carrier] if q not in gate.qubits]
        choices = [(0,) if q in zero else (0, 1) for q in free]
        for vals in itertools.product(*choices):
            yield dict(zip(free, vals))

    flavor = "CX" if gate.kind == "mcx" else "CZ"
    ctrl_fixed = {q: b for q, b in need.items() if qmap.carrier_of(q) == cc}
    tgt_fixed = {q: b for q, b in need.items() if qmap.carrier_of(q) == tc}
    out = []
    for fa in assignments(cc):
        cl = _level(qmap, cc, {**ctrl_fixed, **fa})
        for fb in assignments(tc):
            base = {**tgt_fixed, **fb}
            t0 = _level(qmap, tc, {**base, tq: 0})
            t1 = _level(qmap, tc, {**base, tq: 1})
            out.append(Entangler(cc, cl, tc, t0, t1, flavor, label))
    return out


def _toffoli_network(gate: LogicalGate) -> list[LogicalGate]:
    """Six-CNOT network for a two-control X/Z (negated controls wrapped in X)."""
    a, b = gate.controls
    (c,) = gate.target
    t = lambda q: LogicalGate("opaque-unitary", (q,), matrix=_T)
    tdg = lambda q: LogicalGate("opaque-unitary", (q,), matrix=_TDG)
    h = LogicalGate("h", (c,))
    core = [cx(b, c), tdg(c), cx(a, c), t(c), cx(b, c), tdg(c), cx(a, c), t(b), t(c),
            cx(a, b), t(a), tdg(b), cx(a, b)]
    if gate.kind == "mcx":
        core = [h] + core[:9] + [h] + core[9:]
    flips = [LogicalGate("x", (q,)) for q in gate.negated_controls]
    return flips + core + flips


def lower_gate(gate: LogicalGate, qmap: QloqMap, zero_qubits: Iterable[int] = ()) -> list[PhysicalOp]:
    carriers = {qmap.carrier_of(q) for q in gate.qubits}
    if len(carriers) == 1:
        return embed_logical_gate(gate, qmap)
    if gate.kind in ("mcx", "mcz") and len(carriers) == 2:
        return list(bridge_entanglers(gate, qmap, zero_qubits))
    if gate.kind == "swap" and len(carriers) == 2:
        a, b = gate.target
        ops: list[PhysicalOp] = []
        for g in (cx(a, b), cx(b, a), cx(a, b)):
            ops += bridge_entanglers(g, qmap, zero_qubits)
        return ops
    if gate.kind in ("mcx", "mcz") and len(gate.controls) == 2 and len(carriers) == 3:
        ops = []
        for g in _toffoli_network(gate):
            ops += lower_gate(g, qmap, zero_qubits)
        return ops
    raise CircuitError(f"no lowering rule for {gate!r} spanning {len(carriers)} carriers")


def lower_circuit(circuit: LogicalCircuit, qmap: QloqMap) -> PhysicalCircuit:
    """Gate-by-gate physical form of ``circuit`` under ``qmap``."""
    qmap.require_valid(num_qubits=circuit.num_qubits)
    ops: list[PhysicalOp] = []
    for g in circuit.gates:
        ops += lower_gate(g, qmap)
    return PhysicalCircuit(qmap, tuple(_merge_locals(ops)))


def _merge_locals(ops: list[PhysicalOp]) -> list[PhysicalOp]:
    """Fuse runs of local ops on the same carrier that are not separated by an entangler touching it."""
    out: list[PhysicalOp] = []
    pending: dict[int, int] = {}
    for op in ops:
        if isinstance(op, LocalOp):
            j = pending.get(op.carrier)
            if j is not None:
                out[j] = LocalOp(op.carrier, op.matrix @ out[j].matrix)
            else:
                pending[op.carrier] = len(out)
                out.append(op)
        else:
            pending.pop(op.control, None)
            pending.pop(op.target, None)
            out.append(op)
    return out
