"""End-to-end one-hit and 3SAT procedures.

Register layout for an oracle with ``N`` inputs (wire indices of the dense
register):

    e1 = 0 .. N-1,  e2 = N .. 2N-1,  u = 2N .. 3N-1,  oracle output = 3N,
    oracle ancillas = 3N+1 ..

``e1`` feeds the oracle, ``e2`` is its entangled copy and is what gets measured,
``u`` is the unentangled register that controls the phase inversions and is
then driven to |0>.

Three backends compute the same final ``e2`` distribution:

* ``dense``: the full register, gate by gate;
* ``structured``: a ``2^(2N)`` table over ``(e, u)``, valid because ``e1 == e2``
  on the whole support; the oracle is still evaluated through its gates;
* ``analytic``: the uniform distribution over the zeros of the truth function.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .cnf import Assignment, CnfFormula, eval_formula
from .errors import CapExceeded, IntegrityError, NoZeros
from .nonlinear import DriveStats, NonlinearConfig, drive_register
from .oracles import (
    OneHitSpec,
    OracleProgram,
    evaluate_program,
    synth_equality_inverse_oracle,
    synth_sat_inverse_oracle,
    truth_table,
)
from .state import (
    MAX_QUBITS,
    Circuit,
    GateKind,
    StateVector,
    decode_index,
    encode_bits,
    format_ket,
    marginal,
    new_state,
    run_circuit,
    sample_measurement,
)

BACKENDS = ("dense", "structured", "analytic")
ANALYTIC_CAP = 24
UNITARY_CAP = 3
DEFAULT_REPS = 20


@dataclass(frozen=True)
class RegisterLayout:
    n: int
    e1: tuple[int, ...]
    e2: tuple[int, ...]
    u: tuple[int, ...]
    oracle_out: int
    oracle_ancillas: tuple[int, ...]

    @classmethod
    def for_oracle(cls, oracle: OracleProgram) -> "RegisterLayout":
        n = oracle.n_inputs
        a = len(oracle.ancilla_wires)
        return cls(
            n,
            tuple(range(n)),
            tuple(range(n, 2 * n)),
            tuple(range(2 * n, 3 * n)),
            3 * n,
            tuple(range(3 * n + 1, 3 * n + 1 + a)),
        )

    @property
    def total_wires(self) -> int:
        return 3 * self.n + 1 + len(self.oracle_ancillas)

    def oracle_wire_map(self, oracle: OracleProgram) -> dict[int, int]:
        mapping = dict(zip(oracle.input_wires, self.e1))
        mapping[oracle.output_wire] = self.oracle_out
        mapping.update(zip(oracle.ancilla_wires, self.oracle_ancillas))
        return mapping


@dataclass
class GlobalUnitary:
    n: int
    matrix: np.ndarray


@dataclass
class OneHitResult:
    target: str
    e2_distribution: dict[str, float]
    success_probability: float
    drive_stats: list[DriveStats]
    backend: str
    e2_probabilities: np.ndarray = field(repr=False, default=None)


@dataclass
class SatVerdict:
    verdict: str
    witness: Assignment | None
    confidence: float
    trials: int
    t_history: list[int]
    zeros_count: int | None = None
    seed: int = 0
    backend: str = "structured"

    @property
    def satisfiable(self) -> bool:
        return self.verdict == "SAT"


# ---------------------------------------------------------------- preparation


def prepare_input_state(layout: RegisterLayout) -> StateVector:
    if layout.total_wires > MAX_QUBITS:
        raise CapExceeded(
            f"dense register needs {layout.total_wires} qubits, cap is {MAX_QUBITS}"
        )
    return run_circuit(new_state(layout.total_wires), preparation_circuit(layout))


def preparation_circuit(layout: RegisterLayout) -> Circuit:
    circ = Circuit(layout.total_wires)
    for a, b in zip(layout.e1, layout.e2):
        circ.append(GateKind.H, a)
        circ.append(GateKind.CNOT, a, b)
    for q in layout.u:
        circ.append(GateKind.H, q)
    return circ


def oracle_compute_circuit(oracle: OracleProgram, layout: RegisterLayout) -> Circuit:
    return oracle.circuit.remap(layout.oracle_wire_map(oracle), layout.total_wires)


def cpi_circuit(layout: RegisterLayout) -> Circuit:
    circ = Circuit(layout.total_wires)
    for u, e2 in zip(layout.u, layout.e2):
        circ.append(GateKind.CPI, layout.oracle_out, u, e2)
    return circ


def phase_stage_circuit(oracle: OracleProgram, layout: RegisterLayout) -> Circuit:
    compute = oracle_compute_circuit(oracle, layout)
    circ = Circuit(layout.total_wires, list(compute.ops))
    circ.extend(cpi_circuit(layout).ops)
    circ.extend(compute.inverse().ops)
    return circ


def apply_oracle_phase_stage(
    state: StateVector, oracle: OracleProgram, layout: RegisterLayout
) -> StateVector:
    """Compute the oracle, phase-invert through one CPI per input, uncompute."""
    return run_circuit(state, phase_stage_circuit(oracle, layout))


def build_global_unitary(spec: OneHitSpec) -> GlobalUnitary:
    """Diagonal phase operator on ``|e1;e2;u>`` (index bits as in the register layout)."""
    n = spec.n
    if n > UNITARY_CAP:
        raise CapExceeded(f"global unitary limited to N <= {UNITARY_CAP}, got {n}")
    idx = np.arange(1 << (3 * n))
    e1 = idx & ((1 << n) - 1)
    u = idx >> (2 * n)
    parity = np.array([bin(v).count("1") & 1 for v in u])
    diag = np.where((e1 != encode_bits(spec.target)) & (parity == 1), -1.0, 1.0)
    return GlobalUnitary(n, np.diag(diag).astype(np.complex128))


# ------------------------------------------------------------------- backends


@dataclass
class _FinalState:
    state: StateVector
    e2_qubits: tuple[int, ...]
    stats: list[DriveStats]

    def e2_probabilities(self) -> np.ndarray:
        return marginal(self.state, self.e2_qubits)


def _popcount_parity(values: np.ndarray) -> np.ndarray:
    v = values.copy()
    parity = np.zeros_like(v)
    while np.any(v):
        parity ^= v & 1
        v >>= 1
    return parity


def _dense_final(oracle: OracleProgram, nl: NonlinearConfig | None) -> _FinalState:
    layout = RegisterLayout.for_oracle(oracle)
    state = prepare_input_state(layout)
    state = apply_oracle_phase_stage(state, oracle, layout)
    state, stats = drive_register(state, layout.u, nl)
    return _FinalState(state, layout.e2, stats)


def _structured_final(oracle: OracleProgram, nl: NonlinearConfig | None) -> _FinalState:
    n = oracle.n_inputs
    if 2 * n > MAX_QUBITS:
        raise CapExceeded(f"structured table needs {2 * n} qubits, cap is {MAX_QUBITS}")
    f = evaluate_program(oracle).astype(np.int64)
    idx = np.arange(1 << (2 * n), dtype=np.int64)
    e = idx & ((1 << n) - 1)
    u = idx >> n
    sign = 1 - 2 * (f[e] & _popcount_parity(u))
    state = StateVector(2 * n, sign.astype(np.complex128) / (1 << n))
    state, stats = drive_register(state, range(n, 2 * n), nl)
    return _FinalState(state, tuple(range(n)), stats)


def analytic_outcome(
    truth: np.ndarray | Callable[[Sequence[int]], int], n_inputs: int, extra_bit: bool = False
) -> tuple[np.ndarray, int]:
    """Uniform distribution over the zeros of an inverse oracle, and its hit count.

    With ``extra_bit`` the last input is the 3SAT selector bit and the
    all-ones zero it always contributes is not counted.
    """
    if n_inputs > ANALYTIC_CAP:
        raise CapExceeded(f"analytic enumeration limited to {ANALYTIC_CAP} inputs")
    if callable(truth):
        table = np.array(
            [truth([int(b) for b in decode_index(k, n_inputs)]) for k in range(1 << n_inputs)],
            dtype=np.uint8,
        )
    else:
        table = np.asarray(truth, dtype=np.uint8)
    zeros = table == 0
    count = int(np.count_nonzero(zeros))
    if count == 0:
        raise NoZeros("inverse oracle has no zeros; every branch cancels")
    dist = zeros / count
    hits = count - 1 if extra_bit and zeros[-1] else count
    return dist, hits


def _analytic_final(oracle: OracleProgram, extra_bit: bool) -> tuple[_FinalState, int]:
    n = oracle.n_inputs
    dist, hits = analytic_outcome(truth_table(oracle), n, extra_bit)
    state = StateVector(n, np.sqrt(dist).astype(np.complex128))
    return _FinalState(state, tuple(range(n)), []), hits


def _final(oracle: OracleProgram, nl, backend: str, extra_bit: bool = False):
    if backend == "dense":
        return _dense_final(oracle, nl), None
    if backend == "structured":
        return _structured_final(oracle, nl), None
    if backend == "analytic":
        return _analytic_final(oracle, extra_bit)
    raise ValueError(f"backend must be one of {BACKENDS}, got {backend!r}")


# ------------------------------------------------------------------- one-hit


def run_onehit(
    spec: OneHitSpec, nl: NonlinearConfig | None = None, backend: str = "structured"
) -> OneHitResult:
    oracle = synth_equality_inverse_oracle(spec)
    final, _ = _final(oracle, nl, backend)
    probs = final.e2_probabilities()
    dist = {decode_index(k, spec.n): float(p) for k, p in enumerate(probs) if p > 1e-15}
    return OneHitResult(
        spec.target,
        dist,
        float(probs[encode_bits(spec.target)]),
        final.stats,
        backend,
        probs,
    )


def onehit_trace(spec: OneHitSpec, nl: NonlinearConfig | None = None) -> list[tuple[str, str]]:
    """Dense run of the one-hit procedure rendered in ket notation after each stage.

    The drive is applied while the oracle output is still computed so the
    intermediate states keep the output wire visible; driving ``u`` commutes
    with uncomputing the oracle, which never touches ``u``.
    For ``N = 1`` kets are written ``|f u i>`` (oracle output, unentangled qubit,
    measured copy); otherwise ``|e1;e2;u;f>``.
    """
    if spec.n > 3:
        raise CapExceeded("trace output is limited to N <= 3")
    oracle = synth_equality_inverse_oracle(spec)
    layout = RegisterLayout.for_oracle(oracle)
    if spec.n == 1:
        with_f: list = [layout.oracle_out, layout.u[0], layout.e2[0]]
        notation = "|f u i>"
    else:
        with_f = [list(layout.e1), list(layout.e2), list(layout.u), [layout.oracle_out]]
        notation = "|e1;e2;u;f>"
    plain = [list(layout.e1), list(layout.e2), list(layout.u)]

    compute = oracle_compute_circuit(oracle, layout)
    state = prepare_input_state(layout)
    lines = [("prepared |e1;e2;u>", format_ket(state, plain))]
    state = run_circuit(state, compute)
    lines.append((f"oracle computed {notation}", format_ket(state, with_f)))
    state = run_circuit(state, cpi_circuit(layout))
    lines.append((f"post-phase {notation}", format_ket(state, with_f)))
    state, _ = drive_register(state, layout.u, nl)
    lines.append((f"post-drive {notation}", format_ket(state, with_f)))
    state = run_circuit(state, compute.inverse())
    lines.append(("uncomputed |e1;e2;u>", format_ket(state, plain)))
    return lines


# ---------------------------------------------------------------------- 3SAT


def _split_e2(bits: str, n_vars: int) -> tuple[int, Assignment]:
    x = tuple(int(b) for b in bits[:n_vars])
    return int(bits[n_vars]), x


def _check_outcome(formula: CnfFormula, t: int, x: Assignment) -> None:
    if t == 0 and not eval_formula(formula, x):
        raise IntegrityError(f"measured t=0 with non-satisfying x={x}")
    if t == 1 and not all(x):
        raise IntegrityError(f"measured t=1 with x={x} (only all-ones can survive)")


def _sample_e2(final: _FinalState, seed) -> str:
    bits = sample_measurement(final.state, seed)
    return "".join(bits[q] for q in final.e2_qubits)


def sat_final(formula: CnfFormula, nl: NonlinearConfig | None = None, backend: str = "structured"):
    """Final pre-measurement state of the 3SAT procedure and, for ``analytic``, S."""
    oracle = synth_sat_inverse_oracle(formula)
    return _final(oracle, nl, backend, extra_bit=True)


def sat_t0_probability(
    formula: CnfFormula, nl: NonlinearConfig | None = None, backend: str = "structured"
) -> float:
    final, _ = sat_final(formula, nl, backend)
    probs = final.e2_probabilities()
    n = formula.var_count
    return float(probs[: 1 << n].sum())


def run_sat_trial(
    formula: CnfFormula,
    nl: NonlinearConfig | None = None,
    seed=0,
    backend: str = "structured",
) -> tuple[int, Assignment]:
    final, _ = sat_final(formula, nl, backend)
    t, x = _split_e2(_sample_e2(final, seed), formula.var_count)
    _check_outcome(formula, t, x)
    return t, x


def solve_sat(
    formula: CnfFormula,
    M: int = DEFAULT_REPS,
    nl: NonlinearConfig | None = None,
    seed: int = 0,
    backend: str = "structured",
) -> SatVerdict:
    """Repeat the procedure up to M times; any t=0 proves satisfiability.

    The pre-measurement state does not depend on the trial, so it is built
    once and sampled with per-trial seeds ``(seed, trial)``.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    final, hits = sat_final(formula, nl, backend)
    history: list[int] = []
    for trial in range(M):
        t, x = _split_e2(_sample_e2(final, [seed, trial]), formula.var_count)
        _check_outcome(formula, t, x)
        history.append(t)
        if t == 0:
            return SatVerdict("SAT", x, 1.0, M, history, hits, seed, backend)
    return SatVerdict("UNSAT", None, 1.0 - 2.0 ** (-M), M, history, hits, seed, backend)
