"""Command-line driver: ``nlsat {solve,onehit,verify-oracle,matrix,scaling}``.

Exit codes: 0 success / SAT / verified, 1 UNSAT / verification failure,
2 usage, input or capacity error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from .cnf import CnfFormula, parse_dimacs, random_3cnf
from .errors import NlsatError
from .nonlinear import NonlinearConfig
from .oracles import (
    OneHitSpec,
    emit_circuit,
    gate_census,
    parse_circuit,
    synth_sat_inverse_oracle,
    verify_synthesis,
)
from .pipeline import (
    BACKENDS,
    DEFAULT_REPS,
    build_global_unitary,
    onehit_trace,
    run_onehit,
    solve_sat,
)
from .state import decode_index

SCHEMA_VERSION = 1


def _nonlinear(args) -> NonlinearConfig:
    return NonlinearConfig(mode=args.nonlinear, epsilon=args.epsilon)


def _read_formula(path: str) -> CnfFormula:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise NlsatError(f"cannot read {path}: {exc.strerror}") from None
    return parse_dimacs(data)


def _write_json(report: dict, dest: str) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


def sat_report(formula: CnfFormula, verdict, nl: NonlinearConfig, wall_time: float) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": "solve",
        "formula_sha256": formula.digest(),
        "var_count": formula.var_count,
        "clause_count": formula.clause_count,
        "backend": verdict.backend,
        "nonlinear": nl.as_dict(),
        "reps": verdict.trials,
        "seed": verdict.seed,
        "t_history": verdict.t_history,
        "verdict": verdict.verdict,
        "witness": None if verdict.witness is None else "".join(map(str, verdict.witness)),
        "confidence": verdict.confidence,
        "zeros_count": verdict.zeros_count,
        "wall_time_s": wall_time,
    }


def cmd_solve(args) -> int:
    formula = _read_formula(args.path)
    nl = _nonlinear(args)
    if args.emit_circuit:
        Path(args.emit_circuit).write_text(emit_circuit(synth_sat_inverse_oracle(formula)))
    start = time.perf_counter()
    verdict = solve_sat(formula, args.reps, nl, args.seed, args.backend)
    elapsed = time.perf_counter() - start
    if args.json != "-":
        if verdict.satisfiable:
            print("SAT " + "".join(map(str, verdict.witness)))
        else:
            print(f"UNSAT confidence={verdict.confidence!r}")
    if args.json:
        _write_json(sat_report(formula, verdict, nl, elapsed), args.json)
    return 0 if verdict.satisfiable else 1


def cmd_onehit(args) -> int:
    try:
        spec = OneHitSpec(args.n, args.target)
    except ValueError as exc:
        args.parser.error(str(exc))
    nl = _nonlinear(args)
    if args.trace:
        if args.n > 3:
            args.parser.error("--trace is limited to --n <= 3")
        for label, ket in onehit_trace(spec, nl):
            print(f"{label}: {ket}")
    start = time.perf_counter()
    result = run_onehit(spec, nl, args.backend)
    elapsed = time.perf_counter() - start
    print(f"P(e2={spec.target}) = {result.success_probability:.9f}")
    if args.json:
        _write_json(
            {
                "schema": SCHEMA_VERSION,
                "command": "onehit",
                "n": spec.n,
                "target": spec.target,
                "backend": args.backend,
                "nonlinear": nl.as_dict(),
                "success_probability": result.success_probability,
                "e2_distribution": result.e2_distribution,
                "drive_steps": [s.steps_used for s in result.drive_stats],
                "wall_time_s": elapsed,
            },
            args.json,
        )
    return 0


def cmd_matrix(args) -> int:
    target = args.target if args.target is not None else "0" * args.n
    try:
        spec = OneHitSpec(args.n, target)
    except ValueError as exc:
        args.parser.error(str(exc))
    u = build_global_unitary(spec).matrix
    n = spec.n
    diag = np.real(np.diag(u)).astype(int)
    print(f"# diag(U), N={n}, target={target}, index bits e1;e2;u")
    for k, v in enumerate(diag):
        bits = decode_index(k, 3 * n)
        print(f"{k} {bits[:n]};{bits[n:2 * n]};{bits[2 * n:]} {v:+d}")
    resid = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    print(f"unitarity_residual = {resid:g}")
    return 0


def scaling_rows(var_count: int, clauses_max: int, seed: int = 0, lowered: bool = False):
    """Census of oracles over nested random formulas: row m uses the first m clauses."""
    rng = np.random.default_rng(seed)
    pool = random_3cnf(var_count, clauses_max, rng).clauses
    for m in range(1, clauses_max + 1):
        census = gate_census(synth_sat_inverse_oracle(CnfFormula(var_count, pool[:m])), lowered)
        yield {"clauses": m, "gates": census.total, "ancillas": census.ancillas, "depth": census.depth}


def cmd_scaling(args) -> int:
    if args.clauses_max < 1:
        args.parser.error("--clauses-max must be >= 1")
    if args.vars < 1:
        args.parser.error("--vars must be >= 1")
    out = open(args.out, "w", newline="") if args.out != "-" else sys.stdout
    try:
        writer = csv.DictWriter(out, ["clauses", "gates", "ancillas", "depth"], lineterminator="\n")
        writer.writeheader()
        for row in scaling_rows(args.vars, args.clauses_max, args.seed, args.lowered):
            writer.writerow(row)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_verify_oracle(args) -> int:
    formula = _read_formula(args.path)
    if args.circuit:
        program = parse_circuit(Path(args.circuit).read_text(), source=formula)
    else:
        program = synth_sat_inverse_oracle(formula)
    if args.emit_circuit:
        Path(args.emit_circuit).write_text(emit_circuit(program))
    report = verify_synthesis(program)
    if report.ok:
        print(f"OK {report.rows_checked} rows, {program.wire_count} wires")
        return 0
    if not report.bijective:
        print("FAIL circuit is not a permutation of basis states")
    for row, reason in report.violations:
        print(f"FAIL {row}: {reason}")
    return 1


def _add_nonlinear_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--backend", choices=BACKENDS, default="structured")
    p.add_argument("--nonlinear", choices=("ideal", "iterated"), default="ideal")
    p.add_argument("--epsilon", type=float, default=0.1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlsat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide satisfiability of a DIMACS 3-CNF file")
    p.add_argument("path")
    p.add_argument("--reps", type=int, default=DEFAULT_REPS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", metavar="PATH", help="write the run report ('-' for stdout)")
    p.add_argument("--emit-circuit", metavar="PATH")
    _add_nonlinear_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("onehit", help="run the one-hit oracle procedure")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--json", metavar="PATH")
    _add_nonlinear_flags(p)
    p.set_defaults(func=cmd_onehit)

    p = sub.add_parser("verify-oracle", help="exhaustively check a synthesized 3SAT oracle")
    p.add_argument("path")
    p.add_argument("--circuit", metavar="PATH", help="check this circuit file instead")
    p.add_argument("--emit-circuit", metavar="PATH")
    p.set_defaults(func=cmd_verify_oracle)

    p = sub.add_parser("matrix", help="dump the diagonal of the global phase operator")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("scaling", help="gate counts of 3SAT oracles versus clause count")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--clauses-max", type=int, required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lowered", action="store_true", help="count after MCX lowering")
    p.set_defaults(func=cmd_scaling)

    for name, action in sub.choices.items():
        action.set_defaults(parser=action)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NlsatError, ValueError, OSError) as exc:
        print(f"nlsat {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
