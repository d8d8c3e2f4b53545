"""Command-line entry point: ``hpclifford <subcommand> [flags]``.

Exit codes: 0 success, 1 bad input (partition, files), 2 a verification failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .bell import bell_measurement_distribution, run_bell_protocol, symbolic_fidelity
from .clifford import CliffordTableau, from_gates, gate_count_qubits, parse_gates, random_clifford
from .hp import HpInstance, Partition, PartitionError, build, entropy_rc
from .local import run_local_protocol, single_qubit_error, symbolic_fidelity_local
from .logical import (
    LogicalExistenceError,
    construct_logical,
    stabilizer_generators,
    verify_existence_identity,
)
from .otoc_wigner import verify_appendix
from .pauli import PauliOperator

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2
CSV_COLUMNS = ("trial", "kernel_dim_bell", "kernel_dim_local", "fidelity_bell", "fidelity_local", "detected_error")


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# instance construction


def resolve_partition(args) -> Partition:
    n, n_a, n_b, n_d = args.n, args.na, args.nb, args.nd
    if n is None and n_b is None:
        raise PartitionError("give --n or --nb")
    if n is None:
        n = n_a + n_b
    if n_b is not None and n_a + n_b != n:
        raise PartitionError(f"n_a + n_b = {n_a + n_b} does not match n = {n}")
    if n_d is None:
        raise PartitionError("--nd is required")
    if n_d > n:
        raise PartitionError(f"n_d = {n_d} exceeds n = {n}")
    return Partition.from_sizes(n, n_a, n_d)


def resolve_seed(args) -> int:
    if args.seed is None:
        args.seed = int(np.random.SeedSequence().entropy % (1 << 63))
    return args.seed


def load_unitary(args, n: int | None, rng: np.random.Generator) -> CliffordTableau:
    try:
        if args.gates:
            with open(args.gates) as fh:
                gates = parse_gates(fh.read())
            width = gate_count_qubits(gates)
            if n is not None and width > n:
                raise InputError(f"gate file touches {width} qubits but n = {n}")
            return from_gates(gates, n if n is not None else width)
        if args.tableau:
            with open(args.tableau) as fh:
                return CliffordTableau.from_json(json.load(fh))
    except OSError as exc:
        raise InputError(f"cannot read {exc.filename}: {exc.strerror}") from exc
    except (ValueError, KeyError) as exc:
        raise InputError(f"malformed unitary file: {exc}") from exc
    if n is None:
        raise PartitionError("--n (or --na and --nb) is required for a random unitary")
    return random_clifford(n, rng)


def instance_from_args(args, rng: np.random.Generator) -> HpInstance:
    explicit = args.gates or args.tableau
    n = args.n if args.n is not None else (args.na + args.nb if args.nb is not None else None)
    u = load_unitary(args, n, rng)
    if explicit and args.n is None and args.nb is None:
        args.n = u.n
    part = resolve_partition(args)
    return build(u, part)


def instance_summary(inst: HpInstance) -> dict:
    p = inst.part
    return {
        "n": p.n, "n_a": p.n_a, "n_b": p.n_b, "n_c": p.n_c, "n_d": p.n_d,
        "d_wires": list(inst.d_wires),
        "kernel_dim_bell": inst.kernel_dim,
        "kernel_dim_local": inst.kernel_dim_local,
        "entropy_rc": entropy_rc(inst),
    }


# ---------------------------------------------------------------------------
# ensemble


@dataclass(frozen=True)
class EnsembleConfig:
    n: int
    n_a: int
    n_d: int
    trials: int
    seed: int
    protocol: str = "bell"
    simulate: bool = False
    inject_error: bool = False


@dataclass
class EnsembleReport:
    config: EnsembleConfig
    recoverable_fraction_bell: float
    recoverable_fraction_local: float
    mean_fidelity: float
    rows: list[dict] = field(repr=False, default_factory=list)

    def to_json(self) -> dict:
        return {
            "config": asdict(self.config),
            "recoverable_fraction_bell": self.recoverable_fraction_bell,
            "recoverable_fraction_local": self.recoverable_fraction_local,
            "mean_fidelity": self.mean_fidelity,
            "trials": self.rows,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.rows)
        return buf.getvalue()


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def run_trial(cfg: EnsembleConfig, trial: int) -> dict:
    rng = trial_rng(cfg.seed, trial)
    inst = build(random_clifford(cfg.n, rng), Partition.from_sizes(cfg.n, cfg.n_a, cfg.n_d))
    fid_bell = symbolic_fidelity(inst)
    fid_local = symbolic_fidelity_local(inst)
    detected = False
    if cfg.simulate or cfg.inject_error:
        fid_bell = run_bell_protocol(inst, rng).fidelity
        error = None
        if cfg.inject_error:
            j = int(rng.integers(cfg.n_d))
            error = single_qubit_error(inst, j, "XYZ"[int(rng.integers(3))])
        out = run_local_protocol(inst, rng, error=error)
        fid_local, detected = out.fidelity, out.detected_error
    return {
        "trial": trial,
        "kernel_dim_bell": inst.kernel_dim,
        "kernel_dim_local": inst.kernel_dim_local,
        "fidelity_bell": fid_bell,
        "fidelity_local": fid_local,
        "detected_error": detected,
    }


def _run_chunk(cfg: EnsembleConfig, trials: range) -> list[dict]:
    return [run_trial(cfg, t) for t in trials]


def run_ensemble(cfg: EnsembleConfig, workers: int = 1) -> EnsembleReport:
    if cfg.trials <= 0:
        raise ValueError("trials must be positive")
    if workers <= 1:
        rows = _run_chunk(cfg, range(cfg.trials))
    else:
        step = -(-cfg.trials // (4 * workers))
        chunks = [range(s, min(s + step, cfg.trials)) for s in range(0, cfg.trials, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = [r for part in pool.map(_run_chunk, [cfg] * len(chunks), chunks) for r in part]
    key = "fidelity_local" if cfg.protocol == "local" else "fidelity_bell"
    total = len(rows)
    return EnsembleReport(
        config=cfg,
        recoverable_fraction_bell=sum(r["kernel_dim_bell"] == 0 for r in rows) / total,
        recoverable_fraction_local=sum(r["kernel_dim_local"] == 0 for r in rows) / total,
        mean_fidelity=float(np.mean([r[key] for r in rows])),
        rows=rows,
    )


# ---------------------------------------------------------------------------
# subcommands


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def cmd_recover_bell(args) -> int:
    rng = np.random.default_rng(resolve_seed(args))
    inst = instance_from_args(args, rng)
    runs = [run_bell_protocol(inst, rng).to_json(inst) for _ in range(args.trials)]
    report = {
        "seed": args.seed,
        "instance": instance_summary(inst),
        "symbolic_fidelity": symbolic_fidelity(inst),
        "outcome_support": len(bell_measurement_distribution(inst)),
        "runs": runs,
    }
    _emit(args, _dump(report))
    return EXIT_OK


def cmd_recover_local(args) -> int:
    rng = np.random.default_rng(resolve_seed(args))
    inst = instance_from_args(args, rng)
    runs = [run_local_protocol(inst, rng).to_json(inst.part.n_d) for _ in range(args.trials)]
    report = {
        "seed": args.seed,
        "instance": instance_summary(inst),
        "symbolic_fidelity": symbolic_fidelity_local(inst),
        "runs": runs,
    }
    _emit(args, _dump(report))
    return EXIT_OK


def cmd_ensemble(args) -> int:
    part = resolve_partition(args)
    cfg = EnsembleConfig(part.n, part.n_a, part.n_d, args.trials, resolve_seed(args),
                         args.protocol, args.simulate, args.inject_error)
    report = run_ensemble(cfg, args.workers)
    if args.format == "csv":
        _emit(args, report.to_csv())
        summary = {k: v for k, v in report.to_json().items() if k != "trials"}
        sys.stderr.write(_dump(summary))
    else:
        _emit(args, _dump(report.to_json()))
    return EXIT_OK


def cmd_logical(args) -> int:
    rng = np.random.default_rng(resolve_seed(args))
    inst = instance_from_args(args, rng)
    n_a = inst.part.n_a
    logicals = {}
    try:
        for j in range(n_a):
            for letter in "XZ":
                p = PauliOperator.single(n_a, j, letter)
                logicals[f"{letter}_{j}"] = str(construct_logical(inst, p))
    except LogicalExistenceError as exc:
        _emit(args, _dump({"instance": instance_summary(inst), "error": str(exc)}))
        return EXIT_VERIFY
    report = {
        "instance": instance_summary(inst),
        "logicals": logicals,
        "stabilizers": [g.to_label() for g in stabilizer_generators(inst)],
    }
    if n_a <= 2 and inst.part.n_d <= 3:
        report["existence_identity"] = verify_existence_identity(inst)
    _emit(args, _dump(report))
    return EXIT_OK if report.get("existence_identity", True) else EXIT_VERIFY


def cmd_verify_appendix(args) -> int:
    n = args.n if args.n is not None else 2
    rows = verify_appendix(n)
    if args.format == "json":
        _emit(args, _dump([asdict(r) for r in rows]))
    else:
        lines = [f"{'check':<42}{'result':<8}max deviation"]
        lines += [f"{r.name:<42}{'PASS' if r.passed else 'FAIL':<8}{r.deviation:.3e}" for r in rows]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if all(r.passed for r in rows) else EXIT_VERIFY


def cmd_demo(args) -> int:
    rng = np.random.default_rng(resolve_seed(args))
    inst = instance_from_args(args, rng)
    p = inst.part
    out = [
        f"seed {args.seed}: random Clifford on n={p.n} qubits, A={p.n_a}, D={p.n_d} (wires {list(inst.d_wires)})",
        f"forward map kernel dimension {inst.kernel_dim}; S(RC) = {entropy_rc(inst)} bits",
    ]
    res = run_bell_protocol(inst, rng)
    q = PauliOperator.from_symplectic(p.n_d, res.measured_q_d).to_label()
    f = PauliOperator.from_symplectic(p.n_a, res.feedback_p_a).to_label()
    out.append(f"Bell measurement on D Dbar read {q}; feedback {f} on Rbar; fidelity {res.fidelity:g}")
    loc = run_local_protocol(inst, rng)
    if loc.detected_error:
        out.append(f"local Z measurements: syndrome {loc.s:#x} flagged as an error")
    else:
        out.append(f"local Z measurements: syndrome {loc.s:#x}; fidelity {loc.fidelity:g} "
                   f"(Z-map kernel dimension {inst.kernel_dim_local})")
    if inst.kernel_dim == 0:
        out.append(f"logical X_0 = {construct_logical(inst, PauliOperator.single(p.n_a, 0, 'X'))}")
    _emit(args, "\n".join(out) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_common(sp, unitary: bool = True):
    sp.add_argument("--n", type=int, help="total qubits n = n_a + n_b")
    sp.add_argument("--na", type=int, default=1, help="input register size")
    sp.add_argument("--nb", type=int, help="remaining input qubits (alternative to --n)")
    sp.add_argument("--nd", type=int, help="size of the accessible output D")
    sp.add_argument("--seed", type=int, help="RNG seed (drawn from OS entropy if omitted)")
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--out", help="write output here instead of stdout")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    if unitary:
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--gates", metavar="FILE", help="gate-list text file")
        src.add_argument("--tableau", metavar="FILE", help="JSON tableau file")
        src.add_argument("--random", action="store_true", help="random Clifford (default)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hpclifford", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, text in (
        ("recover-bell", cmd_recover_bell, "Bell-measurement recovery on one instance"),
        ("recover-local", cmd_recover_local, "local-measurement recovery on one instance"),
        ("logical", cmd_logical, "logical operators and code stabilizers"),
        ("demo", cmd_demo, "narrated single run"),
    ):
        sp = sub.add_parser(name, help=text)
        _add_common(sp)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("ensemble", help="statistics over random Cliffords")
    _add_common(sp, unitary=False)
    sp.set_defaults(func=cmd_ensemble, trials=1000, format="csv")
    sp.add_argument("--protocol", choices=("bell", "local"), default="bell")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--simulate", action="store_true", help="run the stabilizer simulation per trial")
    sp.add_argument("--inject-error", action="store_true",
                    help="single-qubit Pauli error on D before local measurement (implies --simulate)")

    sp = sub.add_parser("verify-appendix", help="exact F-matrix and Wigner checks")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("table", "json"), default="table")
    sp.set_defaults(func=cmd_verify_appendix)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PartitionError, InputError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
