import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qloq.circuit import LogicalCircuit, QloqMap, cx, mcx, mcz
from qloq.costs import (bridge_cost, circuit_cost, crossover_holds, external_cost, lower_bound_table,
                        min_entangling_count, multicontrolled_reference_cost, qloq_unitary_lower_bound,
                        qsd_cost, qsd_table, qubit_unitary_lower_bound, remap_cost, speedup_estimate)

from reference_values import ESTIMATED_BOUNDS, LOWER_BOUNDS, QSD_TABLE


def test_lower_bound_grid():
    table = lower_bound_table()
    assert {k: v for k, (v, _) in table.items()} == LOWER_BOUNDS
    assert {k for k, (_, star) in table.items() if star} == ESTIMATED_BOUNDS


@given(st.integers(2, 10))
def test_qubit_bound_is_parameter_count(n):
    assert qubit_unitary_lower_bound(n) == math.ceil((4 ** n - 3 * n - 1) / 4)


@given(st.integers(1, 4), st.integers(1, 4), st.integers(2, 8))
def test_bridge_cost_is_monotone_in_carrier_size(ga, gb, n):
    if n > ga + gb:
        n = ga + gb
    if n < 2:
        return
    assert bridge_cost(ga + 1, gb, n) == 2 * bridge_cost(ga, gb, n)


@given(st.integers(1, 4), st.integers(2, 6))
def test_bridge_and_external_agree_with_one_outside_qubit(g, n):
    if n - 1 > g:
        return
    assert bridge_cost(g, 1, n) == external_cost(g, n, 1)


def test_bridge_cost_small_cases():
    assert bridge_cost(1, 1, 2) == 1
    assert bridge_cost(2, 2, 4) == 1
    assert bridge_cost(2, 2, 2) == 4
    with pytest.raises(ValueError):
        bridge_cost(1, 1, 3)


def test_multicontrolled_references():
    assert [multicontrolled_reference_cost(n, "qubit-plain") for n in (2, 3, 4)] == [1, 6, 14]
    assert multicontrolled_reference_cost(5, "qubit-lower-bound") == 10
    assert multicontrolled_reference_cost(4, "aux-level", q=4) == 5


@given(st.integers(2, 12), st.integers(1, 4))
def test_min_entangling_count(n, g):
    k = min_entangling_count(n, g)
    assert k == math.ceil(n / g) - 1


@given(st.lists(st.integers(1, 3), min_size=2, max_size=3))
def test_qloq_bound_never_exceeds_qubit_bound(part):
    assert qloq_unitary_lower_bound(part) <= qubit_unitary_lower_bound(sum(part))


def test_qsd_table():
    for row in qsd_table():
        ref = QSD_TABLE[row["n"]]
        got = (row["qubit_lower_bound"], row["qubit_qsd"], row["li"], row["qloq_g2"], row["qloq_g3"], row["qloq_g4"])
        assert got == ref


@given(st.integers(3, 14), st.integers(2, 5))
def test_qloq_closed_form_recursion(n, g):
    if g >= n:
        return
    # one more qubit: four sub-blocks plus three multiplexors of 2^(n) entanglers each
    assert qsd_cost(n + 1, "qloq", g=g) == 4 * qsd_cost(n, "qloq", g=g) + 3 * 2 ** n


@given(st.integers(2, 8))
def test_remap_cost(f):
    assert remap_cost(f) == 2 ** (f + 2) - 8
    assert remap_cost(f, round_trip=False) * 2 == remap_cost(f)


def test_crossovers():
    assert crossover_holds(3) == (False, False)
    for n in range(4, 13):
        assert crossover_holds(n) == (True, True)


def test_optimized_qubit_qsd_is_integral():
    for n in range(2, 12):
        assert isinstance(qsd_cost(n, "qubit-optimized"), int)
    assert qsd_cost(3, "qubit-base") == 24


def test_speedup():
    assert speedup_estimate(1, 1, 1, 1, 1, 1) == 1
    assert speedup_estimate(Fraction(2, 27), Fraction(1, 729), 500, 1, 1, 1) == 27000
    with pytest.raises(ValueError):
        speedup_estimate(0, 1, 1, 1, 1, 1)


def test_circuit_cost_rules():
    pairs = QloqMap(((0, 1), (2, 3)))
    assert circuit_cost(LogicalCircuit(4, (mcx([0, 1, 2], 3),)), pairs).total == 1
    assert circuit_cost(LogicalCircuit(4, (cx(1, 2),)), pairs).total == 4
    assert circuit_cost(LogicalCircuit(4, (cx(0, 1),)), pairs).total == 0
    qfa = LogicalCircuit(4, (mcx([0, 1], 3), cx(0, 1), mcx([1, 2], 3), cx(1, 2), cx(0, 1)))
    m = QloqMap(((0,), (1, 2), (3,)))
    rep = circuit_cost(qfa, m)
    assert not rep.complete
    rep = circuit_cost(qfa, m, aux_levels=True)
    assert rep.complete and rep.total == 9
    with pytest.raises(ValueError):
        circuit_cost(qfa, m, strict=True)
    heur = circuit_cost(qfa, m, heuristic=True)
    assert heur.complete and any(g.upper_bound for g in heur.per_gate)


def test_cost_report_serialization():
    rep = circuit_cost(LogicalCircuit(4, (mcz([0, 1, 2], 3), cx(1, 2))), QloqMap(((0, 1), (2, 3))))
    assert rep.to_csv().splitlines()[-1] == "total,5"
    assert '"total": 5' in rep.to_json()
