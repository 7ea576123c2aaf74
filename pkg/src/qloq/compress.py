"""Gate-by-gate compressibility statistics and the expected cost ratio R."""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .costs import external_cost


@dataclass(frozen=True)
class ConnectivityMultigraph:
    N: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for i, j in self.edges:
            if i == j or not (0 <= i < self.N and 0 <= j < self.N):
                raise ValueError(f"bad edge ({i}, {j}) for N={self.N}")


def _pairs(n: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(n), 2)), dtype=np.int64).reshape(-1, 2)


def random_circuit(N: int, m: int, seed: int | None = None) -> ConnectivityMultigraph:
    """m two-qubit gates, each on a pair drawn uniformly (with replacement) from the C(N,2) pairs."""
    if N < 2 or m < 0:
        raise ValueError("need N >= 2 and m >= 0")
    pairs = _pairs(N)
    idx = np.random.default_rng(seed).integers(0, len(pairs), size=m)
    return ConnectivityMultigraph(N, tuple((int(a), int(b)) for a, b in pairs[idx]))


def is_compressible(graph: ConnectivityMultigraph, G: int = 2) -> bool:
    """Some pair has more gates between its two qubits than gates leaving the pair."""
    if G != 2:
        raise ValueError("only G = 2 is analyzed")
    mult: dict[tuple[int, int], int] = {}
    deg = [0] * graph.N
    for i, j in graph.edges:
        key = (min(i, j), max(i, j))
        mult[key] = mult.get(key, 0) + 1
        deg[i] += 1
        deg[j] += 1
    return any(3 * k > deg[i] + deg[j] for (i, j), k in mult.items())


def _compressible_counts(counts: np.ndarray, pairs: np.ndarray, N: int) -> np.ndarray:
    """Vectorized test over rows of per-pair gate counts."""
    inc = np.zeros((len(pairs), N))
    inc[np.arange(len(pairs)), pairs[:, 0]] = 1
    inc[np.arange(len(pairs)), pairs[:, 1]] = 1
    deg = counts @ inc
    ends = deg[:, pairs[:, 0]] + deg[:, pairs[:, 1]]
    return np.any(3 * counts > ends, axis=1)


def compressible_fraction(N: int, m: int, trials: int, seed: int | None = None,
                          chunk: int = 20000) -> tuple[float, float]:
    """Monte Carlo fraction of random circuits that are compressible, with its standard error."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if N < 2 or m < 0:
        raise ValueError("need N >= 2 and m >= 0")
    if m == 1:
        return 1.0, 0.0
    pairs = _pairs(N)
    P = len(pairs)
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < trials:
        b = min(chunk, trials - done)
        draws = rng.integers(0, P, size=(b, m))
        counts = np.zeros((b, P))
        np.add.at(counts, (np.repeat(np.arange(b), m), draws.ravel()), 1)
        hits += int(_compressible_counts(counts, pairs, N).sum())
        done += b
    p = hits / trials
    return p, math.sqrt(p * (1 - p) / trials)


def exact_compressible_fraction(N: int, m: int) -> Fraction:
    """Exact probability by summing multinomial weights over per-pair gate counts."""
    pairs = _pairs(N)
    P = len(pairs)
    total = Fraction(0)
    for bars in itertools.combinations(range(m + P - 1), P - 1):
        cuts = (-1,) + bars + (m + P - 1,)
        counts = np.array([[cuts[k + 1] - cuts[k] - 1 for k in range(P)]], dtype=float)
        if _compressible_counts(counts, pairs, N)[0]:
            w = math.factorial(m)
            for c in counts[0]:
                w //= math.factorial(int(c))
            total += w
    return total / P ** m


def fraction_sweep(Ns: Sequence[int], max_gates: int, trials: int, seed: int) -> list[tuple[int, int, float, float]]:
    rows = []
    for N in Ns:
        for m in range(1, max_gates + 1):
            p, se = compressible_fraction(N, m, trials, seed + 1000 * N + m)
            rows.append((N, m, p, se))
    return rows


# ---------------------------------------------------------------------------
# expected cost ratio

@dataclass(frozen=True)
class RatioQuery:
    g: int
    n: int
    N: int

    def __post_init__(self):
        if self.n < 2 or self.g < 1 or self.N < max(self.n, self.g + 1):
            raise ValueError(f"invalid ratio query {self}")


def expected_ratio_exact(q: RatioQuery) -> Fraction:
    """Mean external-rule cost of a random n-qubit gate touching the carrier, over 2n - 3."""
    g, n, N = q.g, q.n, q.N
    s = n - g if n > g else 1
    num = sum(math.comb(g, n - x) * math.comb(N - g, x) * external_cost(g, n, x)
              for x in range(s, n))
    den = (math.comb(N, n) - math.comb(N - g, n)) * (2 * n - 3)
    return Fraction(num, den)


def expected_ratio_closed(q: RatioQuery) -> float:
    return float(expected_ratio_exact(q))


def expected_ratio_mc(q: RatioQuery, trials: int, seed: int | None = None) -> tuple[float, float]:
    """Sample uniform n-subsets that touch the carrier (qubits 0..g-1) and price them."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    g, n, N = q.g, q.n, q.N
    rng = np.random.default_rng(seed)
    # cost indexed by the number x of gate qubits off the carrier
    price = np.array([0] + [external_cost(g, n, x) if n - x <= g else 0 for x in range(1, n)], dtype=float)
    costs = []
    got = 0
    while got < trials:
        b = max(1024, 2 * (trials - got))
        keys = rng.random((b, N))
        chosen = np.argpartition(keys, n - 1, axis=1)[:, :n]
        on = (chosen < g).sum(axis=1)
        on = on[on > 0][: trials - got]
        costs.append(price[n - on])
        got += len(on)
    c = np.concatenate(costs) / (2 * n - 3)
    return float(c.mean()), float(c.std(ddof=1) / math.sqrt(len(c))) if len(c) > 1 else 0.0


def threshold_scan(g: int, n: int, N_max: int = 200) -> int | None:
    """Smallest N with R > 1, or None up to N_max."""
    if N_max < n:
        raise ValueError("N_max must be >= n")
    for N in range(max(n, g + 1), N_max + 1):
        if expected_ratio_exact(RatioQuery(g, n, N)) > 1:
            return N
    return None


def ratio_grid(gs: Sequence[int], ns: Sequence[int], N: int) -> dict[tuple[int, int], float]:
    return {(g, n): expected_ratio_closed(RatioQuery(g, n, N)) for g in gs for n in ns}


def threshold_grid(gs: Sequence[int], ns: Sequence[int], N_max: int = 200) -> dict[tuple[int, int], int | None]:
    return {(g, n): threshold_scan(g, n, N_max) for g in gs for n in ns}


def grid_csv(grid: dict, gs: Sequence[int], ns: Sequence[int], fmt=str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["g"] + [f"n={n}" for n in ns])
    for g in gs:
        w.writerow([g] + ["" if grid[(g, n)] is None else fmt(grid[(g, n)]) for n in ns])
    return buf.getvalue()


def fraction_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "m", "fraction", "stderr"])
    for N, m, p, se in rows:
        w.writerow([N, m, f"{p:.6f}", f"{se:.6f}"])
    return buf.getvalue()

