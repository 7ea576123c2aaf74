"""Linear-optical resource model: success probabilities, photon and mode counts, speedups."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .circuit import Entangler, PhysicalCircuit, QloqMap
from .costs import speedup_estimate

# Reference success probabilities of a cascade of post-selected CZs on N qubits.
CASCADE_REFERENCE = {2: Fraction(1, 9), 4: Fraction(1, 81), 6: Fraction(1, 729)}


@dataclass(frozen=True)
class GateModel:
    """Success probability and ancilla-mode cost of each entangler kind."""

    probabilities: Mapping[str, Fraction] = field(default_factory=lambda: {
        "ralph-cz": Fraction(1, 9), "knill-cz": Fraction(2, 27)})
    ancilla_modes: int = 2

    def __post_init__(self):
        for k, p in self.probabilities.items():
            if not 0 < p <= 1:
                raise ValueError(f"success probability of {k} must lie in (0, 1]")

    def __getitem__(self, name: str) -> Fraction:
        return Fraction(self.probabilities[name])


def cascade_success(N: int) -> tuple[Fraction, bool]:
    """(3^-N, interpolated?) for a cascade of post-selected CZs over N qubits."""
    if N < 2:
        raise ValueError("a cascade needs N >= 2")
    if N in CASCADE_REFERENCE:
        return CASCADE_REFERENCE[N], False
    return Fraction(1, 3 ** N), True


def layer_success(kind: str, N: int, G: int = 1, layers: int = 1) -> Fraction:
    if N < 1 or G < 1 or layers < 1:
        raise ValueError("N, G and layers must be >= 1")
    if kind == "heralded-knill":
        per = Fraction(2, 27) ** (math.ceil(N / G) - 1)
    elif kind == "cascade-ralph":
        per = cascade_success(N)[0]
    else:
        raise ValueError(f"unknown layer kind {kind!r}")
    return per ** layers


def circuit_success(pc: PhysicalCircuit, gate: str = "ralph-cz", model: GateModel = GateModel(),
                    overrides: Mapping[int, float] | None = None) -> Fraction | float:
    """Product over entanglers; ``overrides`` maps an entangler's position (0-based among
    entanglers) to its success probability."""
    overrides = dict(overrides or {})
    p: Fraction | float = Fraction(1)
    k = 0
    for op in pc.ops:
        if isinstance(op, Entangler):
            p = p * (overrides.pop(k) if k in overrides else model[op.label if op.label in model.probabilities else gate])
            k += 1
    if overrides:
        raise ValueError(f"overrides refer to missing entanglers {sorted(overrides)}")
    return p


@dataclass(frozen=True)
class ResourceEstimate:
    photons: int
    modes: int
    success: Fraction | float
    notes: str = ""


def resources(qmap: QloqMap, pc: PhysicalCircuit | None = None, dump_ports: int = 0,
              gate: str = "ralph-cz", model: GateModel = GateModel(),
              overrides: Mapping[int, float] | None = None) -> ResourceEstimate:
    """One photon per carrier; 2^g modes per carrier plus ancilla modes and dump ports."""
    if pc is not None and pc.map != qmap:
        raise ValueError("physical circuit map differs from the given map")
    if dump_ports < 0:
        raise ValueError("dump_ports must be >= 0")
    ents = pc.entangler_count if pc is not None else 0
    modes = sum(qmap.levels) + model.ancilla_modes * ents + dump_ports
    success = circuit_success(pc, gate, model, overrides) if pc is not None else Fraction(1)
    return ResourceEstimate(qmap.num_carriers, modes, success, f"{ents} entanglers, {dump_ports} dump ports")


@dataclass(frozen=True)
class Scenario:
    name: str
    success_a: float
    success_b: float
    rate_a: float
    rate_b: float
    iters_a: float
    iters_b: float

    def speedup(self) -> float:
        return speedup_estimate(self.success_a, self.success_b, self.rate_a, self.rate_b,
                                self.iters_a, self.iters_b)


# a: compressed encoding, b: qubit encoding
DEFAULT_SCENARIOS = (
    Scenario("lih-4q", 0.448, 1 / 81, 9000, 20, 218, 103),
    Scenario("one-layer-6q", 2 / 27, 1 / 729, 500, 1, 1, 1),
)


def speedup_table(scenarios: Iterable[Scenario] = DEFAULT_SCENARIOS) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scenario", "success_a", "success_b", "rate_a", "rate_b", "iters_a", "iters_b", "speedup"])
    for s in scenarios:
        w.writerow([s.name, s.success_a, s.success_b, s.rate_a, s.rate_b, s.iters_a, s.iters_b,
                    f"{s.speedup():.6g}"])
    return buf.getvalue()


def heralded_curve(Ns: Sequence[int], Gs: Sequence[int] = (1, 2, 3)) -> list[tuple[int, int, Fraction]]:
    return [(N, G, layer_success("heralded-knill", N, G)) for G in Gs for N in Ns]


def curve_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "G", "success"])
    for N, G, p in rows:
        w.writerow([N, G, f"{float(p):.12g}"])
    return buf.getvalue()
