import numpy as np
import pytest
from hypothesis import given, strategies as st

from qloq.circuit import (CircuitError, Entangler, LocalOp, LogicalCircuit, LogicalGate, PhysicalCircuit, QloqMap,
                          cx, matrix_from_json, matrix_to_json, mcx, mcz, parse_circuit, parse_physical, rot,
                          serialize_circuit, serialize_physical, validate_map)
from qloq.sim import random_unitary


@st.composite
def partitions(draw, max_n=6, max_g=3):
    n = draw(st.integers(1, max_n))
    perm = draw(st.permutations(list(range(n))))
    groups, i = [], 0
    while i < n:
        k = draw(st.integers(1, min(max_g, n - i)))
        groups.append(tuple(perm[i:i + k]))
        i += k
    return QloqMap(tuple(groups))


@given(partitions())
def test_valid_partitions_have_no_problems(qmap):
    assert validate_map(qmap) == []
    assert sorted(qmap.order) == list(range(qmap.num_qubits))
    assert qmap.dim == 2 ** qmap.num_qubits


@given(partitions())
def test_bit_weights_are_distinct_powers_within_carrier(qmap):
    for grp in qmap.partition:
        w = sorted(qmap.bit_weight(q) for q in grp)
        assert w == [1 << k for k in range(len(grp))]


def test_validate_map_reports_problems():
    assert any("more than once" in p or "duplicate" in p for p in validate_map([[0, 1], [1, 2]]))
    assert validate_map([[0], []])
    assert validate_map([[0, 1, 2]], max_g=2)
    assert validate_map([[0], [2]], num_qubits=3)
    with pytest.raises(CircuitError):
        QloqMap(((0, 0),)).require_valid()


def test_map_str():
    assert str(QloqMap(((0, 1), (2, 3)))) == "QLOQ(0,1)(2,3)"
    assert str(QloqMap.qubits(3)) == "qubit-encoding"


def test_gate_validation():
    with pytest.raises(CircuitError):
        cx(1, 1)
    with pytest.raises(CircuitError):
        LogicalGate("bogus", (0,))
    with pytest.raises(CircuitError):
        LogicalGate("opaque-unitary", (0,), matrix=np.ones((2, 2)))
    with pytest.raises(CircuitError):
        LogicalCircuit(2, (cx(0, 2),))


def test_physical_circuit_rejects_bad_levels():
    m = QloqMap(((0, 1), (2,)))
    with pytest.raises(CircuitError):
        PhysicalCircuit(m, (Entangler(0, 4, 1, 0, 1),))
    with pytest.raises(CircuitError):
        PhysicalCircuit(m, (LocalOp(1, np.eye(4)),))
    with pytest.raises(CircuitError):
        PhysicalCircuit(m, (Entangler(0, 1, 0, 0, 1),))


def test_circuit_json_roundtrip(rng):
    u = random_unitary(4, rng)
    c = LogicalCircuit(4, (cx(0, 1), mcz([0, 1, 2], 3, negated=(0,)), rot("y", 2, 0.3),
                           LogicalGate("opaque-unitary", (1, 3), matrix=u), mcx([2], 0)))
    m = QloqMap(((0, 1), (2, 3)))
    c2, m2 = parse_circuit(serialize_circuit(c, m))
    assert c2 == c and m2 == m


def test_physical_json_roundtrip(rng):
    m = QloqMap(((0, 1), (2,)))
    pc = PhysicalCircuit(m, (LocalOp(0, random_unitary(4, rng)), Entangler(0, 3, 1, 0, 1, "CZ", "x")), 0.25)
    pc2 = parse_physical(serialize_physical(pc))
    assert pc2.entangler_count == 1 and pc2.global_phase == 0.25
    assert np.allclose(pc2.ops[0].matrix, pc.ops[0].matrix)


@given(st.integers(0, 2 ** 31))
def test_matrix_json_roundtrip(seed):
    u = random_unitary(4, np.random.default_rng(seed))
    assert np.array_equal(matrix_from_json(matrix_to_json(u)), u)


@pytest.mark.parametrize("doc", ["{", "[]", '{"qubits": 0}', '{"qubits": 2, "gates": [{"kind": "mcx", "target": [5]}]}',
                                 '{"qubits": 2, "map": [[0], [0]], "gates": []}'])
def test_parse_circuit_errors(doc):
    with pytest.raises(CircuitError):
        parse_circuit(doc)
