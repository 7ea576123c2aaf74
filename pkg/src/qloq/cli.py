"""Command-line front end: one subcommand per module, file outputs plus a run manifest."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path

from . import compress, costs, fixtures, loqc, metrics, qsd, vqe
from .circuit import QloqMap, matrix_from_json, parse_circuit, serialize_circuit, serialize_physical

DEFAULT_SEED = 20240601


class DomainError(Exception):
    pass


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def parse_map(text: str) -> QloqMap:
    """``"0,1;2,3"`` -> QLOQ(0,1)(2,3)."""
    try:
        groups = tuple(tuple(int(q) for q in grp.split(",")) for grp in text.split(";") if grp.strip())
    except ValueError:
        raise DomainError(f"cannot parse map {text!r}; expected e.g. '0,1;2,3'") from None
    return QloqMap(groups)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


class Run:
    """Collects outputs for one invocation and writes them with a manifest."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.out = Path(args.out)
        self.files: dict[str, str] = {}
        self.inputs: list[str] = []

    def emit(self, name: str, text: str):
        self.files[name] = text

    def finish(self):
        self.out.mkdir(parents=True, exist_ok=True)
        digests = {}
        for name, text in self.files.items():
            (self.out / name).write_text(text)
            digests[name] = hashlib.sha256(text.encode()).hexdigest()
        manifest = {
            "subcommand": self.args.command,
            "inputs": self.inputs,
            "seed": getattr(self.args, "seed", None),
            "version": _version(),
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "outputs": digests,
        }
        (self.out / f"manifest-{self.args.command}.json").write_text(json.dumps(manifest, indent=2) + "\n")


# ---------------------------------------------------------------------------
# subcommands

def cmd_cost(args, run: Run):
    run.inputs.append(args.circuit)
    circuit, qmap = parse_circuit(_read(args.circuit))
    if args.map:
        qmap = parse_map(args.map)
    if qmap is None:
        raise DomainError("circuit carries no map; pass --map")
    rep = costs.circuit_cost(circuit, qmap, aux_levels=args.aux_levels, strict=args.strict,
                             heuristic=args.heuristic)
    run.emit("cost.csv", rep.to_csv())
    run.emit("cost.json", rep.to_json() + "\n")
    print(f"{qmap}: {rep.total} entanglers" + ("" if rep.complete else " (incomplete: unsupported gates)"))


def cmd_bounds(args, run: Run):
    if args.n < 1 or args.G < 1:
        raise DomainError("--n and --G must be >= 1")
    part = costs.table_partition(args.n, args.G)
    k = costs.qloq_unitary_lower_bound(part)
    star = costs.lower_bound_is_estimate(part)
    run.emit("bounds.csv", f"n,G,k_min,estimate\n{args.n},{args.G},{k},{int(star)}\n")
    print(f"{k}*" if star else k)
    if star:
        print("* estimate: unequal carriers, placement of the two largest is a heuristic")


def cmd_qsd(args, run: Run):
    run.inputs.append(args.unitary)
    u = matrix_from_json(_read(args.unitary))
    if args.remap:
        if args.mode != "qloq":
            raise DomainError("--remap needs --mode qloq")
        pc, rep = qsd.synthesize_qsd_with_remap(u, args.g, verify=args.verify)
    else:
        pc, rep = qsd.synthesize_qsd(u, args.mode, args.g, verify=args.verify)
    run.emit("circuit.json", serialize_physical(pc) + "\n")
    lines = ["stage,entanglers"] + [f"{k},{v}" for k, v in rep.by_stage.items()] + [f"total,{rep.entanglers}"]
    run.emit("cost.csv", "\n".join(lines) + "\n")
    print(f"{rep.entanglers} entanglers (closed form {rep.closed_form})")
    if args.verify:
        if rep.fidelity < 1 - 1e-9:
            raise DomainError(f"verification failed: fidelity {rep.fidelity:.3e}")
        print("verified, fidelity ≥ 1−1e-9")


def cmd_compress(args, run: Run):
    did = False
    if args.fig4:
        rows = compress.fraction_sweep(args.N, args.max_gates, args.trials, args.seed)
        run.emit("compressible_fraction.csv", compress.fraction_csv(rows))
        did = True
    if args.thresholds:
        gs = args.gs or list(range(2, 8))
        grid = compress.threshold_grid(gs, args.ns, args.N_max)
        run.emit("thresholds.csv", compress.grid_csv(grid, gs, args.ns))
        did = True
    if args.asymptotic:
        gs = args.gs or list(range(1, 8))
        grid = compress.ratio_grid(gs, args.ns, 10 ** 12)
        run.emit("asymptotic_ratio.csv", compress.grid_csv(grid, gs, args.ns, lambda v: f"{v:.3f}"))
        did = True
    if not did:
        raise DomainError("choose at least one of --fig4, --thresholds, --asymptotic")
    print("wrote " + ", ".join(run.files))


def cmd_metrics(args, run: Run):
    names = fixtures.BENCHMARK_SET if args.benchmark else args.ansatz
    if not names:
        raise DomainError("pass --ansatz NAME (repeatable) or --benchmark")
    ans = [fixtures.builtin_ansatz(n) for n in names]
    rows = metrics.benchmark_sweep(ans, args.pairs, args.samples, args.seed)
    text = metrics.benchmark_csv(rows)
    run.emit("metrics.csv", text)
    sys.stdout.write(text)


def cmd_vqe(args, run: Run):
    run.inputs.append(args.hamiltonian)
    h = vqe.parse_hamiltonian(_read(args.hamiltonian))
    ans = fixtures.builtin_ansatz(args.ansatz)
    cfg = vqe.OptimizerConfig(method=args.optimizer, budget=args.budget, seed=args.seed)
    trace = vqe.vqe_run(ans, h, cfg, input_bits=args.input_bits, shots=args.shots)
    run.emit("trace.csv", trace.to_csv())
    print(f"best energy {trace.best_energy:.10f} after {len(trace.iterations)} evaluations; "
          f"exact ground {h.ground_energy():.10f}")


def cmd_loqc(args, run: Run):
    did = False
    if args.curve:
        rows = loqc.heralded_curve(range(1, args.N_max + 1), args.Gs)
        run.emit("heralded_curve.csv", loqc.curve_csv(rows))
        did = True
    if args.speedup:
        scen = loqc.DEFAULT_SCENARIOS
        if args.scenarios:
            run.inputs.append(args.scenarios)
            try:
                scen = [loqc.Scenario(**d) for d in json.loads(_read(args.scenarios))]
            except (TypeError, json.JSONDecodeError) as exc:
                raise DomainError(f"bad scenario file: {exc}") from None
        text = loqc.speedup_table(scen)
        run.emit("speedup.csv", text)
        sys.stdout.write(text)
        did = True
    if args.resources:
        fx = fixtures.builtin_fixture(args.resources)
        overrides = {0: args.override} if args.override is not None else None
        est = loqc.resources(fx.map, fx.physical(), args.dump_ports, args.gate, overrides=overrides)
        text = (f"fixture,photons,modes,success\n{fx.name},{est.photons},{est.modes},"
                f"{float(est.success):.12g}\n")
        run.emit("resources.csv", text)
        sys.stdout.write(text)
        did = True
    if not did:
        raise DomainError("choose at least one of --curve, --speedup, --resources")


def cmd_fixtures(args, run: Run):
    if not args.name:
        for n in fixtures.FIXTURE_NAMES:
            print(n)
        return
    fx = fixtures.builtin_fixture(args.name)
    run.emit(f"{fx.name}.logical.json", serialize_circuit(fx.circuit, fx.map) + "\n")
    run.emit(f"{fx.name}.physical.json", serialize_physical(fx.physical()) + "\n")
    print(f"{fx.name}: {fx.map}, {fx.physical().entangler_count} entanglers")


# ---------------------------------------------------------------------------

def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qloq", description="Compressed qubit-on-qudit circuit tools.")
    p.add_argument("--version", action="version", version=_version())
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, seeded=False):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--out", default="qloq-out", help="output directory (default: qloq-out)")
        if seeded:
            sp.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"RNG seed (default: {DEFAULT_SEED})")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("cost", cmd_cost, "price a logical circuit under a map")
    sp.add_argument("--circuit", required=True, help="circuit JSON")
    sp.add_argument("--map", help="partition such as '0,1;2,3' (overrides the map in the file)")
    sp.add_argument("--aux-levels", action="store_true", help="allow the auxiliary-level external rule")
    sp.add_argument("--strict", action="store_true", help="fail on unsupported gates")
    sp.add_argument("--heuristic", action="store_true", help="price unsupported gates with an upper bound")

    sp = add("bounds", cmd_bounds, "minimum entangler count for a general unitary")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--G", type=int, required=True, help="qubits per carrier")

    sp = add("qsd", cmd_qsd, "synthesize a unitary by quantum Shannon decomposition")
    sp.add_argument("--unitary", required=True, help="unitary JSON: grid of [re, im] pairs")
    sp.add_argument("--mode", choices=("qubit", "qloq"), default="qubit")
    sp.add_argument("--g", type=int, help="carrier size in qloq mode")
    sp.add_argument("--remap", action="store_true", help="merge into and split out of the carrier")
    sp.add_argument("--verify", action="store_true", help="simulate and check fidelity")

    sp = add("compress", cmd_compress, "compressibility statistics and expected cost ratios", seeded=True)
    sp.add_argument("--fig4", action="store_true", help="compressible fraction vs gate count")
    sp.add_argument("--N", type=_ints, default=[4, 6, 8], help="qubit counts for --fig4")
    sp.add_argument("--max-gates", type=int, default=60)
    sp.add_argument("--trials", type=int, default=10000)
    sp.add_argument("--thresholds", action="store_true", help="threshold N where the ratio exceeds 1")
    sp.add_argument("--asymptotic", action="store_true", help="ratio as N grows without bound")
    sp.add_argument("--gs", type=_ints, help="carrier sizes (default 2..7 for --thresholds, 1..7 for --asymptotic)")
    sp.add_argument("--ns", type=_ints, default=list(range(2, 10)), help="gate sizes (default 2..9)")
    sp.add_argument("--N-max", type=int, default=200)

    sp = add("metrics", cmd_metrics, "expressibility and entangling capability", seeded=True)
    sp.add_argument("--ansatz", action="append", help="built-in ansatz name (repeatable)")
    sp.add_argument("--benchmark", action="store_true", help="run the full benchmark set")
    sp.add_argument("--pairs", type=int, default=5000)
    sp.add_argument("--samples", type=int, default=1000)

    sp = add("vqe", cmd_vqe, "variational eigensolver on a Pauli Hamiltonian", seeded=True)
    sp.add_argument("--hamiltonian", required=True, help="JSON-lines of {coeff, pauli}")
    sp.add_argument("--ansatz", default="lih-qloq")
    sp.add_argument("--optimizer", choices=sorted(vqe.METHODS), default="cobyqa")
    sp.add_argument("--budget", type=int, default=2000)
    sp.add_argument("--shots", type=int, help="shots per group; exact expectation when omitted")
    sp.add_argument("--input-bits", help="initial computational basis state, e.g. 1100")

    sp = add("loqc", cmd_loqc, "linear-optical success probabilities and resources")
    sp.add_argument("--curve", action="store_true", help="heralded layer success vs N for each G")
    sp.add_argument("--N-max", type=int, default=12)
    sp.add_argument("--Gs", type=_ints, default=[1, 2, 3])
    sp.add_argument("--speedup", action="store_true", help="speedup table")
    sp.add_argument("--scenarios", help="JSON list of scenario objects")
    sp.add_argument("--resources", metavar="FIXTURE", help="photons, modes and success for a fixture")
    sp.add_argument("--gate", choices=("ralph-cz", "knill-cz"), default="ralph-cz")
    sp.add_argument("--dump-ports", type=int, default=0)
    sp.add_argument("--override", type=float, help="success probability of the first entangler")

    sp = add("fixtures", cmd_fixtures, "list or export built-in circuits")
    sp.add_argument("--name", help="fixture to export; lists all when omitted")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    run = Run(args)
    try:
        args.fn(args, run)
        run.finish()
    except (DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
