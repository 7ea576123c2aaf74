from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qloq.circuit import Entangler, LocalOp, PhysicalCircuit, QloqMap
from qloq.fixtures import builtin_fixture
from qloq.loqc import (DEFAULT_SCENARIOS, GateModel, Scenario, cascade_success, circuit_success, heralded_curve,
                       layer_success, resources, speedup_table)

import numpy as np


def test_cascade_points():
    assert [cascade_success(N)[0] for N in (2, 4, 6)] == [Fraction(1, 9), Fraction(1, 81), Fraction(1, 729)]
    assert cascade_success(5) == (Fraction(1, 243), True)
    assert layer_success("cascade-ralph", 4) == Fraction(1, 81)


def test_heralded_layers():
    assert layer_success("heralded-knill", 6, 3) == Fraction(2, 27)
    assert layer_success("heralded-knill", 6, 3, layers=2) == Fraction(4, 729)
    with pytest.raises(ValueError):
        layer_success("heralded-knill", 0, 1)
    with pytest.raises(ValueError):
        layer_success("bogus", 2, 1)


@given(st.integers(1, 40), st.integers(1, 8))
def test_heralded_non_decreasing_in_G(N, G):
    assert layer_success("heralded-knill", N, G + 1) >= layer_success("heralded-knill", N, G)


def test_curve_is_exponential():
    rows = heralded_curve(range(1, 13))
    for N, G, p in rows:
        assert p == Fraction(2, 27) ** (-(-N // G) - 1)


def _pc(n_ent):
    m = QloqMap.qubits(2)
    return PhysicalCircuit(m, (LocalOp(0, np.eye(2)),) + (Entangler(0, 1, 1, 0, 1, "CZ"),) * n_ent)


@given(st.integers(0, 4), st.integers(0, 4))
def test_success_multiplicative(a, b):
    assert circuit_success(_pc(a) + _pc(b)) == circuit_success(_pc(a)) * circuit_success(_pc(b))


def test_success_overrides():
    assert circuit_success(_pc(1)) == Fraction(1, 9)
    assert circuit_success(_pc(0)) == 1
    assert circuit_success(_pc(1), overrides={0: 0.448}) == 0.448
    with pytest.raises(ValueError):
        circuit_success(_pc(1), overrides={3: 0.5})
    with pytest.raises(ValueError):
        GateModel({"x": Fraction(0)})


def test_resources():
    lih = builtin_fixture("lih-qloq")
    assert resources(lih.map, lih.physical()).photons == 2
    assert resources(builtin_fixture("lih-qubit").map).photons == 4
    est = resources(QloqMap.qubits(4))
    assert (est.photons, est.modes) == (4, 8)
    m = QloqMap(((0, 1, 2), (3, 4, 5)))
    pc = PhysicalCircuit(m, (Entangler(0, 7, 1, 6, 7, "CZ", "knill-cz"),))
    est = resources(m, pc)
    assert (est.photons, est.modes, est.success) == (2, 18, Fraction(2, 27))


def test_speedups():
    lih, six = (s.speedup() for s in DEFAULT_SCENARIOS)
    assert abs(lih / 7705 - 1) < 0.01
    assert six == pytest.approx(27000, rel=1e-12)
    assert Scenario("same", 0.5, 0.5, 3, 3, 10, 10).speedup() == 1
    assert speedup_table().count("\n") == 3
