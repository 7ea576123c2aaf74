"""Exact three-CNOT synthesis of arbitrary two-qubit unitaries (KAK in the magic basis)."""

from __future__ import annotations

import numpy as np

from .sim import ry, rz

_E = np.array([[1, 1j, 0, 0], [0, 0, 1j, 1], [0, 0, 1j, -1], [1, -1j, 0, 0]]) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]])
_Z = np.diag([1.0 + 0j, -1.0])
_PAULI_DIAGS = np.array([np.diag(_E.conj().T @ np.kron(p, p) @ _E).real for p in (_X, _Y, _Z)])
_SOLVE = np.column_stack([np.ones(4), _PAULI_DIAGS.T])

CX01 = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
CX10 = np.eye(4, dtype=complex)[[0, 3, 2, 1]]


def _kron_factor(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """A, B with A (x) B = m for a matrix known to be a tensor product."""
    r = m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(r)
    a = u[:, 0].reshape(2, 2) * np.sqrt(s[0])
    b = vh[0].reshape(2, 2) * np.sqrt(s[0])
    return a, b


def _real_orthogonal_eig(m: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Real orthogonal P diagonalizing the complex symmetric unitary ``m``."""
    for _ in range(100):
        r = rng.uniform(0.5, 2.0)
        _, p = np.linalg.eigh(m.real + r * m.imag)
        d = p.T @ m @ p
        if np.max(np.abs(d - np.diag(np.diag(d)))) < 1e-12:
            if np.linalg.det(p) < 0:
                p[:, 0] *= -1
            return p
    raise np.linalg.LinAlgError("failed to co-diagonalize real and imaginary parts")


def kak(u: np.ndarray, seed: int = 0):
    """U = exp(i phase) (A1 (x) A2) exp(i(a XX + b YY + c ZZ)) (B1 (x) B2).

    Returns (phase, (A1, A2), (a, b, c), (B1, B2)).
    """
    u = np.asarray(u, dtype=complex)
    det = np.linalg.det(u)
    phase = np.angle(det) / 4
    usu = u * np.exp(-1j * phase)
    up = _E.conj().T @ usu @ _E
    p = _real_orthogonal_eig(up.T @ up, np.random.default_rng(seed))
    d = np.diag(p.T @ up.T @ up @ p)
    lam = np.sqrt(d)
    k1 = up @ p / lam
    if np.linalg.det(k1.real) < 0:
        lam[0] *= -1
        k1[:, 0] *= -1
    k1 = k1.real
    left = _kron_factor(_E @ k1 @ _E.conj().T)
    right = _kron_factor(_E @ p.T @ _E.conj().T)
    psi, a, b, c = np.linalg.solve(_SOLVE, np.angle(lam))
    return phase + psi, left, (a, b, c), right


def canonical_gate(a: float, b: float, c: float) -> np.ndarray:
    return _E @ np.diag(np.exp(1j * (_PAULI_DIAGS.T @ np.array([a, b, c])))) @ _E.conj().T


def _canonical_ops(a: float, b: float, c: float) -> list:
    """Three-CNOT circuit equal to exp(i(aXX + bYY + cZZ)) up to a global phase."""
    h = np.pi / 2
    return [("1q", 1, rz(h)), ("cx", 1, 0),
            ("1q", 0, rz(h - 2 * c)), ("1q", 1, ry(h - 2 * a)), ("cx", 0, 1),
            ("1q", 1, ry(2 * b - h)), ("cx", 1, 0), ("1q", 0, rz(-h))]


def ops_unitary(ops: list) -> np.ndarray:
    u = np.eye(4, dtype=complex)
    for op in ops:
        if op[0] == "cx":
            u = (CX01 if op[1] == 0 else CX10) @ u
        else:
            m = np.kron(op[2], np.eye(2)) if op[1] == 0 else np.kron(np.eye(2), op[2])
            u = m @ u
    return u


def _fuse(ops: list) -> list:
    """Merge adjacent single-qubit matrices on the same wire."""
    out: list = []
    last = {0: None, 1: None}
    for op in ops:
        if op[0] == "cx":
            last = {0: None, 1: None}
            out.append(op)
        elif last[op[1]] is not None:
            j = last[op[1]]
            out[j] = ("1q", op[1], op[2] @ out[j][2])
        else:
            last[op[1]] = len(out)
            out.append(op)
    return out


def three_cnot_decompose(u: np.ndarray) -> tuple[list, float]:
    """Ops (time order) with exactly three CNOTs and phase such that U = exp(i phase) * ops.

    Ops are ("1q", wire, 2x2) or ("cx", control, target); wire 0 is the most
    significant qubit.
    """
    _, (a1, a2), (a, b, c), (b1, b2) = kak(u)
    ops = [("1q", 0, b1), ("1q", 1, b2)] + _canonical_ops(a, b, c) + [("1q", 0, a1), ("1q", 1, a2)]
    ops = _fuse(ops)
    v = ops_unitary(ops)
    phase = float(np.angle(np.vdot(v, u)))
    return ops, phase
