import numpy as np
from hypothesis import given, strategies as st

from qloq.sim import equivalent_up_to_global_phase, random_unitary
from qloq.twoqubit import canonical_gate, kak, ops_unitary, three_cnot_decompose


def _kron(a, b):
    return np.kron(a, b)


@given(st.integers(0, 2 ** 31))
def test_kak_reconstructs(seed):
    u = random_unitary(4, np.random.default_rng(seed))
    phase, (a1, a2), (a, b, c), (b1, b2) = kak(u)
    v = np.exp(1j * phase) * _kron(a1, a2) @ canonical_gate(a, b, c) @ _kron(b1, b2)
    assert np.allclose(v, u, atol=1e-10)


@given(st.integers(0, 2 ** 31))
def test_three_cnot_decomposition(seed):
    u = random_unitary(4, np.random.default_rng(seed))
    ops, phase = three_cnot_decompose(u)
    assert sum(op[0] == "cx" for op in ops) == 3
    assert np.allclose(np.exp(1j * phase) * ops_unitary(ops), u, atol=1e-10)


def test_degenerate_inputs():
    cnot = np.eye(4)[[0, 1, 3, 2]]
    swap = np.eye(4)[[0, 2, 1, 3]]
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    for u in (np.eye(4), cnot, swap, np.kron(h, h), np.diag([1, 1, 1, -1])):
        ops, phase = three_cnot_decompose(u.astype(complex))
        assert equivalent_up_to_global_phase(ops_unitary(ops), u)[0]
