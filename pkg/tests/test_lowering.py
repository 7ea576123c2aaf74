import numpy as np
import pytest
from hypothesis import given, strategies as st

from qloq.circuit import CircuitError, LogicalCircuit, LogicalGate, QloqMap, cx, cz, mcx, mcz, rot
from qloq.costs import bridge_cost
from qloq.lowering import bridge_entanglers, embed_logical_gate, lower_circuit
from qloq.sim import circuit_unitary, equivalent_up_to_global_phase, random_unitary


@st.composite
def bridge_cases(draw):
    ga, gb = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    qmap = QloqMap((tuple(range(ga)), tuple(range(ga, ga + gb))))
    on_a = draw(st.integers(1, ga))
    on_b = draw(st.integers(1, gb))
    qa = draw(st.permutations(list(range(ga))))[:on_a]
    qb = draw(st.permutations(list(range(ga, ga + gb))))[:on_b]
    qs = qa + qb
    t = draw(st.sampled_from(qs))
    kind = draw(st.sampled_from(["mcx", "mcz"]))
    gate = LogicalGate(kind, (t,), tuple(q for q in qs if q != t))
    return qmap, gate


@given(bridge_cases())
def test_bridge_lowering_is_exact_and_matches_cost(case):
    qmap, gate = case
    pc = lower_circuit(LogicalCircuit(qmap.num_qubits, (gate,)), qmap)
    ga, gb = qmap.sizes
    assert pc.entangler_count == bridge_cost(ga, gb, gate.arity)
    ok, f = equivalent_up_to_global_phase(circuit_unitary(pc, logical_order=True),
                                          circuit_unitary(LogicalCircuit(qmap.num_qubits, (gate,))))
    assert ok, f


def test_internal_gates_are_local(rng):
    qmap = QloqMap(((0, 1), (2,)))
    ops = embed_logical_gate(cx(1, 0), qmap)
    assert len(ops) == 1 and ops[0].carrier == 0
    with pytest.raises(CircuitError):
        embed_logical_gate(cx(1, 2), qmap)


def test_three_carrier_toffoli_fallback():
    qmap = QloqMap(((0,), (1,), (2,)))
    c = LogicalCircuit(3, (mcx([0, 1], 2),))
    pc = lower_circuit(c, qmap)
    assert pc.entangler_count == 6
    assert equivalent_up_to_global_phase(circuit_unitary(pc, logical_order=True), circuit_unitary(c))[0]


def test_unsorted_map_lowering(rng):
    qmap = QloqMap(((3, 1), (0, 2)))
    c = LogicalCircuit(4, (rot("y", 3, 0.3), cz(0, 3), mcx([1, 2], 0),
                           LogicalGate("opaque-unitary", (1, 3), matrix=random_unitary(4, rng)), cx(2, 1)))
    pc = lower_circuit(c, qmap)
    assert equivalent_up_to_global_phase(circuit_unitary(pc, logical_order=True), circuit_unitary(c))[0]


def test_zero_qubits_prune_entanglers():
    qmap = QloqMap(((0, 1), (2,)))
    assert len(bridge_entanglers(cx(0, 2), qmap)) == 2
    assert len(bridge_entanglers(cx(0, 2), qmap, zero_qubits=(1,))) == 1


def test_adjacent_locals_are_merged():
    qmap = QloqMap.single(2)
    pc = lower_circuit(LogicalCircuit(2, (rot("x", 0, 0.1), rot("y", 1, 0.2), cx(0, 1))), qmap)
    assert len(pc.ops) == 1 and pc.entangler_count == 0
