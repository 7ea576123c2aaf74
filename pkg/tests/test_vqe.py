import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qloq.circuit import LogicalCircuit, QloqMap, cx, rot
from qloq.metrics import ParameterizedAnsatz
from qloq.vqe import (OptimizerConfig, PauliHamiltonian, expectation_exact, expectation_sampled, greedy_groups,
                      minimize, parse_hamiltonian, pauli_expectation, vqe_run)

paulis = st.text(alphabet="IXYZ", min_size=3, max_size=3)


def su4_ansatz():
    def u3(q):
        return [rot("z", q), rot("y", q), rot("z", q)]
    g = u3(0) + u3(1) + [cx(0, 1), rot("y", 0), rot("z", 1), cx(1, 0), rot("y", 0), cx(0, 1)] + u3(0) + u3(1)
    return ParameterizedAnsatz("su4", LogicalCircuit(2, tuple(g)), QloqMap.single(2))


TOY = PauliHamiltonian(((1.0, "ZZ"), (0.5, "XI")))


@given(st.lists(paulis, min_size=1, max_size=8))
def test_groups_are_compatible_and_cover(terms):
    groups = greedy_groups(terms)
    assert sorted(i for g in groups for i in g) == list(range(len(terms)))
    for g in groups:
        for a in g:
            for b in g:
                assert all(x == "I" or y == "I" or x == y for x, y in zip(terms[a], terms[b]))


@given(st.integers(0, 2 ** 31), paulis)
def test_pauli_expectation_matches_matrix(seed, p):
    r = np.random.default_rng(seed)
    psi = r.standard_normal(8) + 1j * r.standard_normal(8)
    psi /= np.linalg.norm(psi)
    m = PauliHamiltonian(((1.0, p),)).matrix()
    assert np.isclose(pauli_expectation(psi, p), np.vdot(psi, m @ psi).real)


@settings(max_examples=15)
@given(st.integers(0, 2 ** 31))
def test_variational_bound(seed):
    a = su4_ansatz()
    x = np.random.default_rng(seed).uniform(0, 2 * np.pi, a.param_count)
    assert expectation_exact(a, x, TOY) >= TOY.ground_energy() - 1e-12


def test_sampled_estimator_is_unbiased():
    a = su4_ansatz()
    x = np.random.default_rng(3).uniform(0, 2 * np.pi, a.param_count)
    exact = expectation_exact(a, x, TOY)
    est, se = expectation_sampled(a, x, TOY, 20000, seed=1)
    assert abs(est - exact) < 4 * se


def test_parse_hamiltonian():
    h = parse_hamiltonian('{"coeff": 1.0, "pauli": "zz"}\n\n{"coeff": -0.5, "pauli": "XI"}\n')
    assert h.terms == ((1.0, "ZZ"), (-0.5, "XI")) and len(h.groups) == 2
    for bad in ('{"coeff": 1}', '{"coeff": 1, "pauli": "ZQ"}', "nope",
                '{"coeff": 1, "pauli": "Z"}\n{"coeff": 1, "pauli": "ZZ"}'):
        with pytest.raises(ValueError):
            parse_hamiltonian(bad)


@pytest.mark.parametrize("method", ["nelder-mead", "cobyqa", "cobyla"])
def test_minimize_quadratic(method):
    x, f, trace = minimize(lambda v: float((v[0] - 1) ** 2), [0.0], OptimizerConfig(method=method, budget=500))
    assert abs(x[0] - 1) < 1e-3 and f < 1e-6
    assert np.all(np.diff(trace.best_so_far()) <= 0)


def test_budget_respected():
    _, _, trace = minimize(lambda v: float(np.sum(v ** 2)), np.ones(4), OptimizerConfig("cobyqa", budget=7))
    assert len(trace.iterations) <= 7
    with pytest.raises(ValueError):
        minimize(lambda v: 0.0, [0.0], OptimizerConfig("bogus"))


def test_vqe_reaches_ground_state():
    trace = vqe_run(su4_ansatz(), TOY, OptimizerConfig("cobyqa", budget=2000, seed=0))
    assert abs(trace.best_energy - TOY.ground_energy()) < 1e-3
    assert trace.to_csv().startswith("iteration,energy,stderr,best")


def test_vqe_qubit_mismatch():
    with pytest.raises(ValueError):
        vqe_run(su4_ansatz(), PauliHamiltonian(((1.0, "ZZZ"),)))
