"""Built-in circuits: compression examples, the full adder, and benchmark ansatze.

Registry
--------
fig2a            CNOT(0;1) with both qubits on one 4-level carrier; a level swap |2> <-> |3>.
fig2b            CCCX(0,1,2;3) on QLOQ(0,1)(2,3) as X_s, one two-level CNOT, X_s.
fig3             CNOT(1;2) on QLOQ(0,1)(2,3) as four level-conditioned CNOTs.
qfa              Feynman full adder on QLOQ(1,2): CCX(0,1;3) CX(0;1) CCX(1,2;3) CX(1;2) CX(0;1).
sim-circuit-1    Rx, Rz on each of 4 qubits.
sim-circuit-2    circuit 1 followed by the CNOT ladder 3->2->1->0.
sim-circuit-9    H on all, CZ ladder, Rx on all.
qloq-circuit-A   Ry on all, internal CNOT(0;1), CCCZ.  (reconstruction)
qloq-circuit-I..N  Rx on all, then 1..6 layers of [CCCZ, internal CNOTs, Rx on all].  (reconstruction)
qloq-circuit-O   three Rx-Rz-Rx layers around internal CNOTs and one CCCZ.  (reconstruction)
lih-qloq         two-photon LiH ansatz on QLOQ(0,1)(2,3) with one CCCZ.  (reconstruction)
lih-qubit        four-qubit LiH ansatz with a cascade of three CZs.  (reconstruction)

Entries marked "reconstruction" reproduce the reference gate and parameter
counts; their exact single-qubit gate choices were fitted to the reference
expressibility and entangling values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import (CircuitError, Entangler, LocalOp, LogicalCircuit, LogicalGate, PhysicalCircuit,
                      QloqMap, cx, cz, mcx, mcz, rot)
from .lowering import lower_circuit
from .metrics import ParameterizedAnsatz

PAIRS = QloqMap(((0, 1), (2, 3)))
_XS = np.eye(4)[[2, 3, 0, 1]]


@dataclass(frozen=True)
class Fixture:
    name: str
    circuit: LogicalCircuit
    map: QloqMap
    entanglers: int | None = None
    physical_override: PhysicalCircuit | None = None
    is_ansatz: bool = False

    def physical(self) -> PhysicalCircuit:
        return self.physical_override or lower_circuit(self.circuit, self.map)

    def ansatz(self) -> ParameterizedAnsatz:
        return ParameterizedAnsatz(self.name, self.circuit, self.map)


def _layer(axis: str, n: int = 4) -> list[LogicalGate]:
    return [rot(axis, q) for q in range(n)]


def _internal() -> list[LogicalGate]:
    return [cx(0, 1), cx(2, 3)]


def _cccz(negated=()) -> LogicalGate:
    return mcz([0, 1, 2], 3, negated)


def _fig2a() -> Fixture:
    m = QloqMap(((0, 1),))
    phys = PhysicalCircuit(m, (LocalOp(0, np.eye(4)[[0, 1, 3, 2]]),))
    return Fixture("fig2a", LogicalCircuit(2, (cx(0, 1),)), m, 0, phys)


def _fig2b() -> Fixture:
    ops = (LocalOp(0, _XS), LocalOp(1, _XS), Entangler(0, 1, 1, 0, 1), LocalOp(0, _XS), LocalOp(1, _XS))
    return Fixture("fig2b", LogicalCircuit(4, (mcx([0, 1, 2], 3),)), PAIRS, 1, PhysicalCircuit(PAIRS, ops))


def _fig3() -> Fixture:
    ops = tuple(Entangler(0, a, 1, t0, t1) for a in (1, 3) for t0, t1 in ((0, 2), (1, 3)))
    return Fixture("fig3", LogicalCircuit(4, (cx(1, 2),)), PAIRS, 4, PhysicalCircuit(PAIRS, ops))


def _qfa() -> Fixture:
    gates = (mcx([0, 1], 3), cx(0, 1), mcx([1, 2], 3), cx(1, 2), cx(0, 1))
    return Fixture("qfa", LogicalCircuit(4, gates), QloqMap(((0,), (1, 2), (3,))), 15)


def _ansatz(name: str, gates, qmap: QloqMap, entanglers: int) -> Fixture:
    return Fixture(name, LogicalCircuit(4, tuple(gates)), qmap, entanglers, is_ansatz=True)


def _sim1():
    return [g for q in range(4) for g in (rot("x", q), rot("z", q))]


def _layered(layers: int):
    g = _layer("x")
    for _ in range(layers):
        g += [_cccz()] + _internal() + _layer("x")
    return g


def _circuit_o():
    rxzx = [g for q in range(4) for g in (rot("x", q), rot("z", q), rot("x", q))]
    return rxzx + _internal() + rxzx + [_cccz()] + rxzx + _internal()


def _lih_qloq():
    ryz = [g for q in range(4) for g in (rot("y", q), rot("z", q))]
    return ryz + _internal() + [_cccz(negated=(0,))] + ryz + _internal()


def _lih_qubit():
    ryz = [g for q in range(4) for g in (rot("y", q), rot("z", q))]
    return ryz + [cz(0, 1), cz(1, 2), cz(2, 3)] + ryz


_QUBITS4 = QloqMap.qubits(4)

_BUILDERS = {
    "fig2a": _fig2a,
    "fig2b": _fig2b,
    "fig3": _fig3,
    "qfa": _qfa,
    "sim-circuit-1": lambda: _ansatz("sim-circuit-1", _sim1(), _QUBITS4, 0),
    "sim-circuit-2": lambda: _ansatz("sim-circuit-2", _sim1() + [cx(3, 2), cx(2, 1), cx(1, 0)], _QUBITS4, 3),
    "sim-circuit-9": lambda: _ansatz(
        "sim-circuit-9", [LogicalGate("h", (q,)) for q in range(4)] + [cz(3, 2), cz(2, 1), cz(1, 0)] + _layer("x"),
        _QUBITS4, 3),
    "qloq-circuit-A": lambda: _ansatz("qloq-circuit-A", _layer("y") + [cx(0, 1), _cccz()], PAIRS, 1),
    **{f"qloq-circuit-{c}": (lambda c=c, k=k: _ansatz(f"qloq-circuit-{c}", _layered(k), PAIRS, k))
       for k, c in enumerate("IJKLMN", start=1)},
    "qloq-circuit-O": lambda: _ansatz("qloq-circuit-O", _circuit_o(), PAIRS, 1),
    "lih-qloq": lambda: _ansatz("lih-qloq", _lih_qloq(), PAIRS, 1),
    "lih-qubit": lambda: _ansatz("lih-qubit", _lih_qubit(), _QUBITS4, 3),
}

FIXTURE_NAMES = tuple(_BUILDERS)
BENCHMARK_SET = ("sim-circuit-1", "sim-circuit-2", "sim-circuit-9", "qloq-circuit-A",
                 "qloq-circuit-I", "qloq-circuit-J", "qloq-circuit-K", "qloq-circuit-L",
                 "qloq-circuit-M", "qloq-circuit-N", "qloq-circuit-O")

# Reference (entanglers, params, expressibility, entangling capability) per benchmark id.
REFERENCE_METRICS = {
    "sim-circuit-1": (0, 8, 0.2930, 0.0000),
    "sim-circuit-2": (3, 8, 0.3176, 0.6210),
    "sim-circuit-9": (3, 4, 0.6450, 1.0000),
    "qloq-circuit-A": (1, 4, 0.673069874, 0.207796485),
    "qloq-circuit-I": (1, 8, 0.081421924, 0.49003053),
    "qloq-circuit-J": (2, 12, 0.039202524, 0.622025717),
    "qloq-circuit-K": (3, 16, 0.020372673, 0.68568794),
    "qloq-circuit-L": (4, 20, 0.012759938, 0.721151532),
    "qloq-circuit-M": (5, 24, 0.012978008, 0.742729297),
    "qloq-circuit-N": (6, 28, 0.014358822, 0.756693472),
    "qloq-circuit-O": (1, 36, 0.017601636, 0.536901877),
}


def builtin_fixture(name: str) -> Fixture:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise CircuitError(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}") from None


def builtin_ansatz(name: str) -> ParameterizedAnsatz:
    fx = builtin_fixture(name)
    if not fx.is_ansatz:
        raise CircuitError(f"fixture {name!r} is not a parameterized ansatz")
    return fx.ansatz()
