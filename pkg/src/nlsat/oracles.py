"""Reversible synthesis of inverse oracle functions.

An inverse oracle function is 0 on accepted inputs and 1 elsewhere.  Programs
built here use wires ``0..N-1`` for inputs, ``N`` for the output and the rest as
clean ancillas; the pipeline relabels them onto its register layout.  Every
emitted gate is self-inverse, so running a circuit backwards uncomputes it.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .cnf import CnfFormula, satisfying_mask
from .errors import BadWiring, CapExceeded, ParseError
from .state import CLASSICAL_KINDS, Circuit, GateKind, GateOp, encode_bits

# wire values are packed into int64 words during classical simulation
MAX_ORACLE_WIRES = 62
VERIFY_WIRE_BUDGET = 20


@dataclass(frozen=True)
class OneHitSpec:
    """Equality oracle accepting exactly ``target`` (char k = input wire k)."""

    n: int
    target: str

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if len(self.target) != self.n or set(self.target) - {"0", "1"}:
            raise ValueError(f"target must be a {self.n}-character bitstring, got {self.target!r}")


Source = Union[OneHitSpec, CnfFormula]


@dataclass
class OracleProgram:
    circuit: Circuit
    input_wires: tuple[int, ...]
    output_wire: int
    ancilla_wires: tuple[int, ...]
    description: str = ""
    source: Source | None = field(default=None, repr=False)

    @property
    def n_inputs(self) -> int:
        return len(self.input_wires)

    @property
    def wire_count(self) -> int:
        return self.circuit.qubit_count


@dataclass
class GateCensus:
    counts: dict[str, int]
    total: int
    ancillas: int
    depth: int


@dataclass
class VerificationReport:
    rows_checked: int
    violations: list[tuple[str, str]]
    bijective: bool

    @property
    def ok(self) -> bool:
        return self.bijective and not self.violations


def _controlled_x(circuit: Circuit, controls: Sequence[int], target: int) -> None:
    k = len(controls)
    if k == 0:
        circuit.append(GateKind.X, target)
    elif k == 1:
        circuit.append(GateKind.CNOT, controls[0], target)
    elif k == 2:
        circuit.append(GateKind.CCX, controls[0], controls[1], target)
    else:
        circuit.append(GateKind.MCX, *controls, target)


def synth_equality_inverse_oracle(spec: OneHitSpec) -> OracleProgram:
    n = spec.n
    out = n
    circ = Circuit(n + 1)
    flips = [k for k, b in enumerate(spec.target) if b == "0"]
    for k in flips:
        circ.append(GateKind.X, k)
    _controlled_x(circ, range(n), out)
    circ.append(GateKind.X, out)
    for k in reversed(flips):
        circ.append(GateKind.X, k)
    return OracleProgram(
        circ,
        tuple(range(n)),
        out,
        (),
        f"equality inverse oracle, target {spec.target}",
        spec,
    )


def _normalize_clause(clause: Sequence[int]) -> tuple[int, ...] | None:
    """Drop duplicate literals; ``None`` marks a tautology."""
    lits = list(dict.fromkeys(clause))
    vars_ = {abs(l) for l in lits}
    if len(vars_) != len(lits):
        return None
    return tuple(lits)


def synth_sat_inverse_oracle(formula: CnfFormula) -> OracleProgram:
    """Oracle over inputs (x_1..x_n, t) computing not(phi(x)) if t=0, not(AND x) if t=1.

    Layout: inputs ``0..n-1`` are the variables, input ``n`` is the extra bit t,
    then the output wire, one ancilla per clause, the phi wire and the AND wire.
    """
    n = formula.var_count
    m = formula.clause_count
    t = n
    out = n + 1
    clause_wires = list(range(n + 2, n + 2 + m))
    phi = n + 2 + m
    all_x = phi + 1
    wires = all_x + 1
    if wires > MAX_ORACLE_WIRES:
        raise CapExceeded(f"oracle needs {wires} wires, limit is {MAX_ORACLE_WIRES}")

    compute = Circuit(wires)
    for clause, cw in zip(formula.clauses, clause_wires):
        lits = _normalize_clause(clause)
        if lits is None:
            compute.append(GateKind.X, cw)
            continue
        # OR(l) = not AND(not l); a positive literal needs its wire negated
        flips = [l - 1 for l in lits if l > 0]
        for w in flips:
            compute.append(GateKind.X, w)
        _controlled_x(compute, [abs(l) - 1 for l in lits], cw)
        compute.append(GateKind.X, cw)
        for w in reversed(flips):
            compute.append(GateKind.X, w)
    _controlled_x(compute, clause_wires, phi)
    _controlled_x(compute, list(range(n)), all_x)

    circ = Circuit(wires, list(compute.ops))
    circ.append(GateKind.X, t)
    circ.append(GateKind.CCX, t, phi, out)
    circ.append(GateKind.X, t)
    circ.append(GateKind.CCX, t, all_x, out)
    circ.append(GateKind.X, out)
    circ.extend(compute.inverse().ops)

    return OracleProgram(
        circ,
        tuple(range(n + 1)),
        out,
        tuple(clause_wires) + (phi, all_x),
        f"3SAT inverse oracle, {n} variables, {m} clauses, extra input {t}",
        formula,
    )


def _source_of(obj) -> Source:
    if isinstance(obj, OracleProgram):
        if obj.source is None:
            raise ValueError("program carries no one-hit target or formula")
        return obj.source
    return obj


def truth_table(obj: OracleProgram | Source) -> np.ndarray:
    """Inverse oracle values over all inputs; index bit k is input wire k."""
    src = _source_of(obj)
    if isinstance(src, OneHitSpec):
        f = np.ones(1 << src.n, dtype=np.uint8)
        f[encode_bits(src.target)] = 0
        return f
    n = src.var_count
    sat = satisfying_mask(src)
    g = np.empty(1 << (n + 1), dtype=np.uint8)
    g[: 1 << n] = ~sat
    g[1 << n:] = 1
    g[(1 << (n + 1)) - 1] = 0
    return g


def truth_function(obj: OracleProgram | Source) -> Callable[[Sequence[int]], int]:
    """Direct evaluator ``bits -> {0, 1}`` defined from the target or formula, not the gates."""
    src = _source_of(obj)
    if isinstance(src, OneHitSpec):
        target = tuple(int(b) for b in src.target)

        def f(bits):
            return int(tuple(int(b) for b in bits) != target)

        return f

    from .cnf import eval_formula

    n = src.var_count

    def g(bits):
        bits = [int(b) for b in bits]
        x, t = bits[:n], bits[n]
        if t == 0:
            return int(not eval_formula(src, x))
        return int(not all(x))

    return g


def simulate_classical(circuit: Circuit, values: np.ndarray) -> np.ndarray:
    """Run a classical-reversible circuit on packed basis states."""
    v = np.array(values, dtype=np.int64, copy=True)
    for op in circuit.ops:
        if op.kind not in CLASSICAL_KINDS:
            raise BadWiring(f"{op.kind.value} is not a classical-reversible gate")
        cmask = 0
        for c in op.controls:
            cmask |= 1 << c
        tbit = np.int64(1 << op.target)
        if cmask == 0:
            v ^= tbit
        else:
            v ^= np.where((v & cmask) == cmask, tbit, np.int64(0))
    return v


def evaluate_program(program: OracleProgram) -> np.ndarray:
    """Output-wire value for every input assignment with clean ancillas."""
    n = program.n_inputs
    idx = np.arange(1 << n, dtype=np.int64)
    packed = np.zeros_like(idx)
    for k, w in enumerate(program.input_wires):
        packed |= ((idx >> k) & 1) << w
    res = simulate_classical(program.circuit, packed)
    return ((res >> program.output_wire) & 1).astype(np.uint8)


def verify_synthesis(program: OracleProgram) -> VerificationReport:
    wires = program.wire_count
    if wires > VERIFY_WIRE_BUDGET:
        raise CapExceeded(
            f"exhaustive check needs {wires} wires, budget is {VERIFY_WIRE_BUDGET}"
        )
    n = program.n_inputs
    expected = truth_table(program)

    # rows: every input assignment and output-wire value, ancillas clean
    rows = np.arange(1 << (n + 1), dtype=np.int64)
    packed = np.zeros_like(rows)
    for k, w in enumerate(program.input_wires):
        packed |= ((rows >> k) & 1) << w
    packed |= ((rows >> n) & 1) << program.output_wire
    res = simulate_classical(program.circuit, packed)

    violations = []
    out_in = (packed >> program.output_wire) & 1
    out_res = (res >> program.output_wire) & 1
    want = out_in ^ expected[rows & ((1 << n) - 1)]
    others = res & ~np.int64(1 << program.output_wire)
    before = packed & ~np.int64(1 << program.output_wire)
    for r in np.flatnonzero((out_res != want) | (others != before)):
        bits = "".join(str((int(rows[r]) >> k) & 1) for k in range(n))
        row = f"inputs={bits} out0={int(out_in[r])}"
        if out_res[r] != want[r]:
            violations.append((row, f"output {int(out_res[r])}, expected {int(want[r])}"))
        changed = int(others[r] ^ before[r])
        if changed:
            bad = [w for w in range(wires) if (changed >> w) & 1]
            violations.append((row, f"wires {bad} not restored"))

    everything = simulate_classical(program.circuit, np.arange(1 << wires, dtype=np.int64))
    bijective = np.unique(everything).size == everything.size
    return VerificationReport(int(rows.size), violations, bool(bijective))


def lower_mcx(program: OracleProgram) -> OracleProgram:
    """Replace MCX gates with >2 controls by Toffoli V-chains on fresh clean ancillas."""
    need = max(
        (len(op.controls) - 2 for op in program.circuit.ops if op.kind is GateKind.MCX),
        default=0,
    )
    base = program.wire_count
    scratch = list(range(base, base + need))
    circ = Circuit(base + need)
    for op in program.circuit.ops:
        cs = op.controls
        if op.kind is not GateKind.MCX:
            circ.extend([op])
            continue
        if len(cs) <= 2:
            _controlled_x(circ, cs, op.target)
            continue
        k = len(cs)
        ladder = [GateOp(GateKind.CCX, (cs[0], cs[1], scratch[0]))]
        for j in range(2, k - 1):
            ladder.append(GateOp(GateKind.CCX, (cs[j], scratch[j - 2], scratch[j - 1])))
        circ.extend(ladder)
        circ.append(GateKind.CCX, cs[k - 1], scratch[k - 3], op.target)
        circ.extend(reversed(ladder))
    return OracleProgram(
        circ,
        program.input_wires,
        program.output_wire,
        program.ancilla_wires + tuple(scratch),
        program.description + " (MCX lowered to CCX)",
        program.source,
    )


def gate_census(program: OracleProgram, lowered: bool = False) -> GateCensus:
    if lowered:
        program = lower_mcx(program)
    counts = Counter(op.kind.value for op in program.circuit.ops)
    level = [0] * program.wire_count
    depth = 0
    for op in program.circuit.ops:
        d = 1 + max(level[q] for q in op.qubits)
        for q in op.qubits:
            level[q] = d
        depth = max(depth, d)
    return GateCensus(dict(sorted(counts.items())), sum(counts.values()), len(program.ancilla_wires), depth)


def emit_circuit(program: OracleProgram) -> str:
    lines = [f"# {program.description}"] if program.description else []
    lines.append(
        "wires {} inputs {} output {} ancilla {}".format(
            program.wire_count,
            " ".join(map(str, program.input_wires)),
            program.output_wire,
            " ".join(map(str, program.ancilla_wires)),
        ).rstrip()
    )
    for op in program.circuit.ops:
        lines.append(" ".join([op.kind.value, *map(str, op.qubits)]))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str, source: Source | None = None) -> OracleProgram:
    header = None
    ops: list[GateOp] = []
    description = ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line, _, comment = raw.partition("#")
        if not description and comment.strip() and header is None:
            description = comment.strip()
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "wires":
            if header is not None:
                raise ParseError("duplicate header", lineno)
            header = _parse_header(parts, lineno)
            continue
        if header is None:
            raise ParseError("gate before 'wires' header", lineno)
        try:
            op = GateOp(GateKind(parts[0].upper()), tuple(int(p) for p in parts[1:]))
            op.check(header[0])
        except (ValueError, BadWiring) as exc:
            raise ParseError(str(exc), lineno) from None
        ops.append(op)
    if header is None:
        raise ParseError("missing 'wires' header")
    wires, inputs, output, ancillas = header
    return OracleProgram(Circuit(wires, ops), inputs, output, ancillas, description, source)


def _parse_header(parts: list[str], lineno: int):
    sections: dict[str, list[int]] = {}
    key = None
    try:
        for p in parts:
            if p in ("wires", "inputs", "output", "ancilla"):
                key = p
                sections[key] = []
            else:
                sections[key].append(int(p))
    except (ValueError, KeyError):
        raise ParseError(f"malformed header {' '.join(parts)!r}", lineno) from None
    if len(sections.get("wires", [])) != 1 or len(sections.get("output", [])) != 1:
        raise ParseError("header needs one wire count and one output wire", lineno)
    if "inputs" not in sections:
        raise ParseError("header lists no inputs", lineno)
    return (
        sections["wires"][0],
        tuple(sections["inputs"]),
        sections["output"][0],
        tuple(sections.get("ancilla", [])),
    )
