"""Circuit IR: logical gates, carrier maps and carrier-level physical circuits.

Basis convention used everywhere in the package: carriers are ordered as in the
map's partition, and within a carrier the qubits are big-endian in partition
order.  With this choice the level index of a carrier is the binary number
formed by its qubits' bits, so ``|10>_L`` on a 4-level carrier is ``|2>_P``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

UNITARY_ATOL = 1e-12

GATE_KINDS = ("mcx", "mcz", "rx", "ry", "rz", "x", "h", "swap", "opaque-unitary")
_PARAM_COUNT = {"rx": 1, "ry": 1, "rz": 1}
_ONE_QUBIT = ("rx", "ry", "rz", "x", "h")


class CircuitError(ValueError):
    """Raised for structurally invalid circuits, maps or documents."""


def is_unitary(m: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= atol)


@dataclass(frozen=True, eq=False)
class LogicalGate:
    kind: str
    target: tuple[int, ...]
    controls: tuple[int, ...] = ()
    negated_controls: tuple[int, ...] = ()
    params: tuple[float, ...] = ()
    matrix: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "target", tuple(int(q) for q in self.target))
        object.__setattr__(self, "controls", tuple(int(q) for q in self.controls))
        object.__setattr__(self, "negated_controls", tuple(int(q) for q in self.negated_controls))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.matrix is not None:
            m = np.array(self.matrix, dtype=complex)
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)
        self._check()

    def _check(self):
        k = self.kind
        if k not in GATE_KINDS:
            raise CircuitError(f"unknown gate kind {k!r}")
        qs = self.qubits
        if len(set(qs)) != len(qs):
            raise CircuitError(f"{k}: repeated qubit index in {qs}")
        if any(q < 0 for q in qs):
            raise CircuitError(f"{k}: negative qubit index")
        if not set(self.negated_controls) <= set(self.controls):
            raise CircuitError(f"{k}: negated controls must be a subset of controls")
        if len(self.params) != _PARAM_COUNT.get(k, 0):
            raise CircuitError(f"{k}: expected {_PARAM_COUNT.get(k, 0)} params, got {len(self.params)}")
        if k in _ONE_QUBIT:
            if len(self.target) != 1 or self.controls:
                raise CircuitError(f"{k} acts on exactly one qubit and takes no controls")
        elif k == "swap":
            if len(self.target) != 2 or self.controls:
                raise CircuitError("swap takes two targets and no controls")
        elif k in ("mcx", "mcz"):
            if len(self.target) != 1:
                raise CircuitError(f"{k} takes a single target")
        elif k == "opaque-unitary":
            if self.controls or not self.target:
                raise CircuitError("opaque-unitary takes targets only")
            d = 2 ** len(self.target)
            if self.matrix is None or self.matrix.shape != (d, d):
                raise CircuitError(f"opaque-unitary payload must be {d}x{d}")
            if not is_unitary(self.matrix):
                raise CircuitError("opaque-unitary payload is not unitary")
        if k != "opaque-unitary" and self.matrix is not None:
            raise CircuitError(f"{k} does not take a matrix payload")

    @property
    def qubits(self) -> tuple[int, ...]:
        """Controls followed by targets; the order used by :func:`gate_matrix`."""
        return self.controls + self.target

    @property
    def arity(self) -> int:
        return len(self.qubits)

    def with_params(self, params: Sequence[float]) -> "LogicalGate":
        return LogicalGate(self.kind, self.target, self.controls, self.negated_controls,
                           tuple(params), self.matrix)

    def __eq__(self, other):
        if not isinstance(other, LogicalGate):
            return NotImplemented
        same_matrix = (self.matrix is None and other.matrix is None) or (
            self.matrix is not None and other.matrix is not None
            and np.array_equal(self.matrix, other.matrix))
        return (self.kind, self.target, self.controls, set(self.negated_controls), self.params) == (
            other.kind, other.target, other.controls, set(other.negated_controls), other.params
        ) and same_matrix

    def __repr__(self):
        ctl = ",".join(("~" if c in self.negated_controls else "") + str(c) for c in self.controls)
        body = f"{ctl};" if ctl else ""
        par = f"[{', '.join(f'{p:.4g}' for p in self.params)}]" if self.params else ""
        return f"{self.kind}{par}({body}{','.join(map(str, self.target))})"


# convenience constructors
def cx(c: int, t: int, negated: bool = False) -> LogicalGate:
    return LogicalGate("mcx", (t,), (c,), (c,) if negated else ())


def cz(a: int, b: int) -> LogicalGate:
    return LogicalGate("mcz", (b,), (a,))


def mcx(controls: Sequence[int], t: int, negated: Sequence[int] = ()) -> LogicalGate:
    return LogicalGate("mcx", (t,), tuple(controls), tuple(negated))


def mcz(controls: Sequence[int], t: int, negated: Sequence[int] = ()) -> LogicalGate:
    return LogicalGate("mcz", (t,), tuple(controls), tuple(negated))


def rot(axis: str, q: int, theta: float = 0.0) -> LogicalGate:
    return LogicalGate("r" + axis, (q,), params=(theta,))


@dataclass(frozen=True)
class QloqMap:
    """Ordered partition of logical qubits onto carriers.

    Construction does not validate: :func:`validate_map` reports problems and
    :meth:`require_valid` raises on them.
    """

    partition: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "partition", tuple(tuple(int(q) for q in grp) for grp in self.partition))

    @classmethod
    def qubits(cls, n: int) -> "QloqMap":
        """Plain qubit encoding: every logical qubit on its own two-level carrier."""
        return cls(tuple((q,) for q in range(n)))

    @classmethod
    def single(cls, n: int) -> "QloqMap":
        return cls((tuple(range(n)),))

    @property
    def num_carriers(self) -> int:
        return len(self.partition)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.partition)

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(2 ** len(g) for g in self.partition)

    @property
    def num_qubits(self) -> int:
        return sum(self.sizes)

    @property
    def dim(self) -> int:
        return int(np.prod(self.levels, dtype=np.int64))

    @property
    def order(self) -> tuple[int, ...]:
        """Logical qubits in state-vector (carrier-major, big-endian) order."""
        return tuple(q for g in self.partition for q in g)

    def locate(self, q: int) -> tuple[int, int]:
        """(carrier index, position within carrier) of logical qubit ``q``."""
        for i, grp in enumerate(self.partition):
            if q in grp:
                return i, grp.index(q)
        raise CircuitError(f"qubit {q} is not in the map")

    def carrier_of(self, q: int) -> int:
        return self.locate(q)[0]

    def bit_weight(self, q: int) -> int:
        """Value added to its carrier's level index when qubit ``q`` is |1>."""
        i, pos = self.locate(q)
        return 1 << (self.sizes[i] - 1 - pos)

    def require_valid(self, num_qubits: int | None = None, max_g: int | None = None) -> "QloqMap":
        problems = validate_map(self, max_g=max_g, num_qubits=num_qubits)
        if problems:
            raise CircuitError("; ".join(problems))
        return self

    def __str__(self):
        multi = [g for g in self.partition if len(g) > 1]
        if not multi:
            return "qubit-encoding"
        return "QLOQ" + "".join("(" + ",".join(map(str, g)) + ")" for g in multi)


def validate_map(qmap: QloqMap | Sequence[Sequence[int]], max_g: int | None = None,
                 num_qubits: int | None = None) -> list[str]:
    """Diagnostics for a carrier map; an empty list means the map is usable."""
    part = qmap.partition if isinstance(qmap, QloqMap) else tuple(tuple(g) for g in qmap)
    problems = []
    seen: dict[int, int] = {}
    for i, grp in enumerate(part):
        if len(grp) == 0:
            problems.append(f"carrier {i} is empty")
        if max_g is not None and len(grp) > max_g:
            problems.append(f"carrier {i} needs {2 ** len(grp)} levels "
                            f"({len(grp)} qubits > max {max_g})")
        for q in grp:
            if q in seen:
                problems.append(f"qubit {q} duplicated (carriers {seen[q]} and {i})")
            else:
                seen[q] = i
    n = num_qubits if num_qubits is not None else (max(seen) + 1 if seen else 0)
    missing = sorted(set(range(n)) - set(seen))
    extra = sorted(q for q in seen if q < 0 or q >= n)
    if missing:
        problems.append(f"qubits {missing} not covered")
    if extra:
        problems.append(f"qubits {extra} out of range for {n} qubits")
    return problems


@dataclass(frozen=True)
class LogicalCircuit:
    num_qubits: int
    gates: tuple[LogicalGate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            bad = [q for q in g.qubits if q >= self.num_qubits]
            if bad:
                raise CircuitError(f"{g!r}: qubit index {bad[0]} out of range for {self.num_qubits} qubits")

    def __add__(self, other: "LogicalCircuit") -> "LogicalCircuit":
        if other.num_qubits != self.num_qubits:
            raise CircuitError("cannot concatenate circuits of different widths")
        return LogicalCircuit(self.num_qubits, self.gates + other.gates)

    @property
    def num_params(self) -> int:
        return sum(len(g.params) for g in self.gates)


@dataclass(frozen=True, eq=False)
class LocalOp:
    """Carrier-local unitary of dimension ``L`` of that carrier."""

    carrier: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class Entangler:
    """Two-level entangling gate between carriers.

    CX flavor exchanges target levels ``t0``/``t1`` when the control carrier sits
    at ``control_level``; CZ flavor multiplies the joint (control_level, t1)
    component by -1.  Every other level of both carriers is untouched.
    """

    control: int
    control_level: int
    target: int
    t0: int = 0
    t1: int = 1
    flavor: str = "CX"
    label: str | None = None


PhysicalOp = Union[LocalOp, Entangler]


@dataclass(frozen=True)
class PhysicalCircuit:
    map: QloqMap
    ops: tuple[PhysicalOp, ...] = ()
    global_phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        levels = self.map.levels
        for op in self.ops:
            if isinstance(op, LocalOp):
                if not 0 <= op.carrier < len(levels):
                    raise CircuitError(f"local op on unknown carrier {op.carrier}")
                if op.matrix.shape != (levels[op.carrier],) * 2:
                    raise CircuitError(f"local op on carrier {op.carrier} must be "
                                       f"{levels[op.carrier]}x{levels[op.carrier]}")
                if not is_unitary(op.matrix, 1e-10):
                    raise CircuitError("local op matrix is not unitary")
            elif isinstance(op, Entangler):
                if op.flavor not in ("CX", "CZ"):
                    raise CircuitError(f"unknown entangler flavor {op.flavor}")
                if op.control == op.target:
                    raise CircuitError("entangler control and target carriers coincide")
                for c in (op.control, op.target):
                    if not 0 <= c < len(levels):
                        raise CircuitError(f"entangler on unknown carrier {c}")
                if not 0 <= op.control_level < levels[op.control]:
                    raise CircuitError("control level out of range")
                lt = levels[op.target]
                if not (0 <= op.t0 < lt and 0 <= op.t1 < lt and op.t0 != op.t1):
                    raise CircuitError("target levels must be distinct and in range")
            else:
                raise CircuitError(f"unknown physical op {op!r}")

    @property
    def entangler_count(self) -> int:
        return sum(isinstance(op, Entangler) for op in self.ops)

    def __add__(self, other: "PhysicalCircuit") -> "PhysicalCircuit":
        if other.map != self.map:
            raise CircuitError("cannot concatenate physical circuits over different maps")
        return PhysicalCircuit(self.map, self.ops + other.ops, self.global_phase + other.global_phase)


# ---------------------------------------------------------------------------
# JSON interchange

def _complex_grid(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _parse_grid(grid) -> np.ndarray:
    try:
        arr = np.array(grid, dtype=float)
    except (TypeError, ValueError) as exc:
        raise CircuitError(f"bad complex matrix: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise CircuitError("matrix must be a grid of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_to_json(m: np.ndarray) -> str:
    return json.dumps(_complex_grid(m))


def matrix_from_json(text: str) -> np.ndarray:
    try:
        return _parse_grid(json.loads(text))
    except json.JSONDecodeError as exc:
        raise CircuitError(f"malformed JSON: {exc}") from None


def gate_to_dict(g: LogicalGate) -> dict:
    d = {"kind": g.kind, "controls": list(g.controls), "negated_controls": list(g.negated_controls),
         "target": list(g.target), "params": list(g.params)}
    if g.matrix is not None:
        d["matrix"] = _complex_grid(g.matrix)
    return d


def circuit_to_dict(c: LogicalCircuit, qmap: QloqMap | None = None) -> dict:
    d: dict = {"qubits": c.num_qubits}
    if qmap is not None:
        d["map"] = [list(g) for g in qmap.partition]
    d["gates"] = [gate_to_dict(g) for g in c.gates]
    return d


def serialize_circuit(c: LogicalCircuit, qmap: QloqMap | None = None) -> str:
    return json.dumps(circuit_to_dict(c, qmap))


def parse_circuit(document: str | dict) -> tuple[LogicalCircuit, QloqMap | None]:
    """Parse the circuit JSON interchange format.

    Returns the circuit and its map (``None`` when the document carries no map).
    Raises :class:`CircuitError` on malformed JSON, unknown gate kinds, indices
    out of range, invalid maps or non-unitary opaque payloads.
    """
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise CircuitError(f"malformed JSON: {exc}") from None
    else:
        doc = document
    if not isinstance(doc, dict) or "qubits" not in doc:
        raise CircuitError("document must be an object with a 'qubits' field")
    n = doc["qubits"]
    if not isinstance(n, int) or n < 1:
        raise CircuitError("'qubits' must be a positive integer")
    gates = []
    for i, gd in enumerate(doc.get("gates", [])):
        if not isinstance(gd, dict) or "kind" not in gd:
            raise CircuitError(f"gate {i}: missing 'kind'")
        matrix = _parse_grid(gd["matrix"]) if gd.get("matrix") is not None else None
        try:
            gates.append(LogicalGate(
                kind=gd["kind"], target=tuple(gd.get("target", ())), controls=tuple(gd.get("controls", ())),
                negated_controls=tuple(gd.get("negated_controls", ())), params=tuple(gd.get("params", ())),
                matrix=matrix))
        except CircuitError as exc:
            raise CircuitError(f"gate {i}: {exc}") from None
        except (TypeError, ValueError) as exc:
            raise CircuitError(f"gate {i}: {exc}") from None
    circuit = LogicalCircuit(n, tuple(gates))
    qmap = None
    if doc.get("map") is not None:
        qmap = QloqMap(tuple(tuple(g) for g in doc["map"])).require_valid(num_qubits=n)
    return circuit, qmap


def physical_to_dict(pc: PhysicalCircuit) -> dict:
    ops = []
    for op in pc.ops:
        if isinstance(op, LocalOp):
            ops.append({"kind": "local", "carrier": op.carrier, "matrix": _complex_grid(op.matrix)})
        else:
            d = {"kind": "entangler", "control": [op.control, op.control_level],
                 "target": [op.target, op.t0, op.t1], "flavor": op.flavor}
            if op.label:
                d["label"] = op.label
            ops.append(d)
    return {"map": [list(g) for g in pc.map.partition], "global_phase": pc.global_phase,
            "entangler_count": pc.entangler_count, "ops": ops}


def serialize_physical(pc: PhysicalCircuit) -> str:
    return json.dumps(physical_to_dict(pc))


def parse_physical(document: str | dict) -> PhysicalCircuit:
    doc = json.loads(document) if isinstance(document, str) else document
    qmap = QloqMap(tuple(tuple(g) for g in doc["map"])).require_valid()
    ops: list[PhysicalOp] = []
    for od in doc["ops"]:
        if od["kind"] == "local":
            ops.append(LocalOp(od["carrier"], _parse_grid(od["matrix"])))
        elif od["kind"] == "entangler":
            (c, cl), (t, t0, t1) = od["control"], od["target"]
            ops.append(Entangler(c, cl, t, t0, t1, od.get("flavor", "CX"), od.get("label")))
        else:
            raise CircuitError(f"unknown physical op kind {od['kind']!r}")
    pc = PhysicalCircuit(qmap, tuple(ops), float(doc.get("global_phase", 0.0)))
    if "entangler_count" in doc and doc["entangler_count"] != pc.entangler_count:
        raise CircuitError("declared entangler_count does not match ops")
    return pc


def concat(circuits: Iterable[LogicalCircuit]) -> LogicalCircuit:
    circuits = list(circuits)
    out = circuits[0]
    for c in circuits[1:]:
        out = out + c
    return out
