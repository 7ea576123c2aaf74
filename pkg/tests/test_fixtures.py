import pytest

from qloq.circuit import CircuitError
from qloq.fixtures import BENCHMARK_SET, FIXTURE_NAMES, REFERENCE_METRICS, builtin_ansatz, builtin_fixture
from qloq.sim import circuit_unitary, equivalent_up_to_global_phase

import numpy as np


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_physical_form_matches_logical(name):
    fx = builtin_fixture(name)
    circuit = fx.circuit
    if fx.is_ansatz:
        a = fx.ansatz()
        circuit = a.bind(np.random.default_rng(7).uniform(0, 2 * np.pi, a.param_count))
        pc = type(fx)(fx.name, circuit, fx.map).physical()
    else:
        pc = fx.physical()
    ok, f = equivalent_up_to_global_phase(circuit_unitary(pc, logical_order=True), circuit_unitary(circuit))
    assert ok, f
    if fx.entanglers is not None:
        assert pc.entangler_count == fx.entanglers


@pytest.mark.parametrize("name", BENCHMARK_SET)
def test_benchmark_counts(name):
    a = builtin_ansatz(name)
    ents, params, _, _ = REFERENCE_METRICS[name]
    assert a.entanglers == ents and a.param_count == params


def test_unknown_and_non_ansatz():
    with pytest.raises(CircuitError):
        builtin_fixture("nope")
    with pytest.raises(CircuitError):
        builtin_ansatz("qfa")
