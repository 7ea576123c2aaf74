"""Closed-form entangling-gate costs and the gate-by-gate costing engine."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from .circuit import CircuitError, LogicalCircuit, QloqMap

RULES = ("internal", "bridge-eq1", "external-eq15", "unsupported")

# Reference entangler counts of an earlier qudit-assisted unitary scheme, n = 3..7.
LI_REFERENCE_COUNTS = {3: 64, 4: 272, 5: 1184, 6: 4848, 7: 20016}

# Known CNOT counts of ancilla-free n-qubit Toffolis in plain qubit encoding.
_QUBIT_TOFFOLI_COUNTS = {2: 1, 3: 6, 4: 14}


def bridge_cost(g_a: int, g_b: int, n: int) -> int:
    """Entanglers for an n-qubit multi-controlled gate spread over two carriers."""
    if g_a < 1 or g_b < 1:
        raise ValueError("carrier sizes must be >= 1")
    if not 2 <= n <= g_a + g_b:
        raise ValueError(f"arity {n} out of range 2..{g_a + g_b}")
    return 2 ** (g_a + g_b - n)


def external_cost(g: int, n: int, x: int) -> int:
    """Gate with n - x qubits on one g-qubit carrier and x external qubits with spare levels."""
    if x < 1:
        raise ValueError("x = 0 is a carrier-internal gate (cost 0)")
    if g < 1 or n - x > g or n - x < 1:
        raise ValueError(f"need 1 <= n - x <= g, got g={g}, n={n}, x={x}")
    return 2 * x - 2 + 2 ** (g - n + x)


def multicontrolled_reference_cost(n: int, mode: str, q: int | None = None) -> int:
    """Reference entangler counts for n-qubit Toffolis.

    ``qubit-plain``: ancilla-free qubit decompositions (known for n <= 4).
    ``qubit-lower-bound``: 2n for n >= 3.
    ``aux-level``: 2q - 3 over q carriers with spare levels.
    """
    if mode == "qubit-plain":
        if n not in _QUBIT_TOFFOLI_COUNTS:
            raise ValueError(f"no reference count for a {n}-qubit Toffoli")
        return _QUBIT_TOFFOLI_COUNTS[n]
    if mode == "qubit-lower-bound":
        if n < 2:
            raise ValueError("n must be >= 2")
        return 1 if n == 2 else 2 * n
    if mode == "aux-level":
        if q is None or q < 2:
            raise ValueError("aux-level mode needs q >= 2 carriers")
        return 2 * q - 3
    raise ValueError(f"unknown mode {mode!r}")


def min_entangling_count(n_qubits: int, g_max: int) -> int:
    if n_qubits < 1 or g_max < 1:
        raise ValueError("N and G must be >= 1")
    return -(-n_qubits // g_max) - 1


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def qubit_unitary_lower_bound(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return _ceil_div(4 ** n - 3 * n - 1, 4)


def qloq_unitary_lower_bound(partition: Sequence[int]) -> int:
    """Smallest entangler count whose parameter budget can reach all of SU(2^n).

    Each carrier contributes 4^g - 1 local parameters; each entangler between the
    two largest carriers adds (4^ga - 2^ga) + (4^gb - 2^gb).  For equal carriers
    this is the closed form ceil((4^n - 1 - (4^g - 1) n/g) / (2 (4^g - 2^g))).
    """
    sizes = sorted((int(g) for g in partition), reverse=True)
    if not sizes:
        raise ValueError("empty partition")
    if any(g < 1 for g in sizes):
        raise ValueError("carrier sizes must be >= 1")
    if len(sizes) == 1:
        return 0
    n = sum(sizes)
    local = sum(4 ** g - 1 for g in sizes)
    ga, gb = sizes[0], sizes[1]
    per_gate = 4 ** ga - 2 ** ga + 4 ** gb - 2 ** gb
    return max(0, _ceil_div(4 ** n - 1 - local, per_gate))


def lower_bound_is_estimate(partition: Sequence[int]) -> bool:
    """Unequal carriers beyond two make the largest-pair placement a heuristic."""
    return len(partition) > 2 and len(set(partition)) > 1


def table_partition(n: int, g_max: int) -> list[int]:
    """Fill carriers greedily: as many G-qubit carriers as fit, then the remainder."""
    part = [g_max] * (n // g_max)
    if n % g_max:
        part.append(n % g_max)
    return part


def lower_bound_table(ns: Sequence[int] = (2, 3, 4, 5, 6), gs: Sequence[int] = (1, 2, 3)):
    """{(n, G): (k_min, is_estimate)} over the requested grid."""
    out = {}
    for G in gs:
        for n in ns:
            part = table_partition(n, G)
            out[(n, G)] = (qloq_unitary_lower_bound(part), lower_bound_is_estimate(part))
    return out


def remap_cost(f: int, round_trip: bool = True) -> int:
    if f < 2:
        raise ValueError("f must be >= 2")
    rt = 2 ** (f + 2) - 8
    return rt if round_trip else rt // 2


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"cost {x} is not integral")
    return x.numerator


def qsd_cost(n: int, variant: str, *, l: int = 2, c_l: int = 3, g: int | None = None) -> int:
    """Entangler count of Shannon-decomposition variants.

    ``qubit-base``: recursion down to l-qubit blocks costing c_l each.
    ``qubit-optimized``: qubit decomposition with all known optimizations.
    ``qloq``: recursion down to a g-qubit carrier block (free); 0 when g >= n.
    ``qloq-with-remap``: ``qloq`` plus a g-qubit merge/split round trip.
    """
    if variant == "qubit-base":
        if n < l:
            raise ValueError("n must be >= l")
        return 4 ** (n - l) * (c_l + 3 * 2 ** (l - 1)) - 3 * 2 ** (n - 1)
    if variant == "qubit-optimized":
        if n < 1:
            raise ValueError("n must be >= 1")
        return _as_int(Fraction(23, 48) * 4 ** n - Fraction(3, 2) * 2 ** n + Fraction(4, 3))
    if variant in ("qloq", "qloq-with-remap"):
        if g is None or g < 1:
            raise ValueError("qloq variants need g >= 1")
        core = 0 if g >= n else 4 ** (n - g) * 3 * 2 ** (g - 1) - 3 * 2 ** (n - 1)
        if variant == "qloq":
            return core
        return core + remap_cost(g) if g >= 2 else core
    raise ValueError(f"unknown variant {variant!r}")


def qsd_table(ns: Sequence[int] = (3, 4, 5, 6, 7), gs: Sequence[int] = (2, 3, 4)) -> list[dict]:
    rows = []
    for n in ns:
        row = {"n": n, "qubit_lower_bound": qubit_unitary_lower_bound(n),
               "qubit_qsd": qsd_cost(n, "qubit-optimized"), "li": LI_REFERENCE_COUNTS.get(n)}
        for g in gs:
            row[f"qloq_g{g}"] = qsd_cost(n, "qloq-with-remap", g=g)
        rows.append(row)
    return rows


def crossover_holds(n: int) -> tuple[bool, bool]:
    """(g=2 remapped beats optimized qubit QSD, g=3 remapped beats the qubit lower bound)."""
    return (qsd_cost(n, "qloq-with-remap", g=2) < qsd_cost(n, "qubit-optimized"),
            qsd_cost(n, "qloq-with-remap", g=3) < qubit_unitary_lower_bound(n))


def speedup_estimate(success_a: float, success_b: float, rate_a: float, rate_b: float,
                     iters_a: float, iters_b: float) -> float:
    vals = (success_a, success_b, rate_a, rate_b, iters_a, iters_b)
    if any(v <= 0 for v in vals):
        raise ValueError("all speedup inputs must be positive")
    return (success_a / success_b) * (rate_a / rate_b) * (iters_b / iters_a)


# ---------------------------------------------------------------------------
# gate-by-gate engine

@dataclass(frozen=True)
class GateCost:
    index: int
    k: int | None
    rule: str
    note: str = ""
    upper_bound: bool = False


@dataclass(frozen=True)
class CostReport:
    per_gate: tuple[GateCost, ...] = field(default_factory=tuple)

    @property
    def total(self) -> int:
        return sum(gc.k for gc in self.per_gate if gc.k is not None)

    @property
    def complete(self) -> bool:
        """False when some gate was left unpriced."""
        return all(gc.k is not None for gc in self.per_gate)

    def to_json(self) -> str:
        return json.dumps({"per_gate": [asdict(gc) for gc in self.per_gate], "total": self.total,
                           "complete": self.complete}, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["gate_index", "k"])
        for gc in self.per_gate:
            w.writerow([gc.index, "" if gc.k is None else gc.k])
        w.writerow(["total", self.total])
        return buf.getvalue()


def price_gate(gate, qmap: QloqMap, aux_levels: bool = False, heuristic: bool = False,
               index: int = 0) -> GateCost:
    if gate.kind == "opaque-unitary":
        raise CircuitError(f"gate {index}: opaque-unitary blocks must be synthesized, not costed")
    carriers = sorted({qmap.carrier_of(q) for q in gate.qubits})
    n = gate.arity
    if len(carriers) == 1:
        return GateCost(index, 0, "internal")
    sizes = {c: qmap.sizes[c] for c in carriers}
    if len(carriers) == 2:
        ga, gb = (sizes[c] for c in carriers)
        if gate.kind == "swap":
            return GateCost(index, 3 * bridge_cost(ga, gb, 2), "bridge-eq1", "swap as three CNOTs")
        return GateCost(index, bridge_cost(ga, gb, n), "bridge-eq1")
    on = {c: sum(qmap.carrier_of(q) == c for q in gate.qubits) for c in carriers}
    main = max(carriers, key=lambda c: (on[c], sizes[c]))
    others_single = all(sizes[c] == 1 for c in carriers if c != main)
    if aux_levels and others_single:
        x = n - on[main]
        return GateCost(index, external_cost(sizes[main], n, x), "external-eq15",
                        f"carrier {main} with {x} external qubits")
    why = ("externals are not single-qubit carriers" if aux_levels
           else "spans more than two carriers; enable aux_levels for the external rule")
    if heuristic:
        m = len(carriers)
        k = 2 ** (sum(sizes.values()) - n) * (2 * m - 3)
        return GateCost(index, k, "unsupported", f"upper bound over {m} carriers: {why}", True)
    return GateCost(index, None, "unsupported", why)


def circuit_cost(circuit: LogicalCircuit, qmap: QloqMap, aux_levels: bool = False,
                 strict: bool = False, heuristic: bool = False) -> CostReport:
    qmap.require_valid(num_qubits=circuit.num_qubits)
    rows = []
    for i, g in enumerate(circuit.gates):
        gc = price_gate(g, qmap, aux_levels, heuristic, i)
        if strict and gc.rule == "unsupported":
            raise CircuitError(f"gate {i} ({g!r}): {gc.note}")
        rows.append(gc)
    return CostReport(tuple(rows))
