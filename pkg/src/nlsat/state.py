"""Dense state-vector engine.

Basis convention: bit ``k`` of an amplitude index (least significant = qubit 0)
holds the value of qubit ``k``.  Bitstrings produced or consumed by this module
list qubits in register order, i.e. character ``k`` is qubit ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import BadWiring, CapExceeded, DegenerateCancellation

MAX_QUBITS = 28
DEGENERACY_TOL = 1e-12
_SQRT1_2 = 1.0 / np.sqrt(2.0)


class GateKind(str, Enum):
    X = "X"
    H = "H"
    CNOT = "CNOT"
    CCX = "CCX"
    MCX = "MCX"
    CZ = "CZ"
    CPI = "CPI"


_ARITY = {
    GateKind.X: 1,
    GateKind.H: 1,
    GateKind.CNOT: 2,
    GateKind.CCX: 3,
    GateKind.CZ: 2,
    GateKind.CPI: 3,
}

# kinds that permute basis states (the classical-reversible subset)
CLASSICAL_KINDS = frozenset({GateKind.X, GateKind.CNOT, GateKind.CCX, GateKind.MCX})


@dataclass(frozen=True)
class GateOp:
    """A gate and the register indices it acts on.

    Controlled-X kinds list controls first and the target last.  ``CPI`` takes
    ``(f, u, i)``: the oracle-output wire, the unentangled control, and the
    pass-through wire.
    """

    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        n = len(self.qubits)
        if self.kind is GateKind.MCX:
            if n < 2:
                raise BadWiring(f"MCX needs at least 2 qubits, got {n}")
        elif n != _ARITY[self.kind]:
            raise BadWiring(f"{self.kind.value} takes {_ARITY[self.kind]} qubits, got {n}")
        if len(set(self.qubits)) != n:
            raise BadWiring(f"repeated qubit in {self.kind.value}{self.qubits}")
        if min(self.qubits) < 0:
            raise BadWiring(f"negative qubit index in {self.kind.value}{self.qubits}")

    @property
    def controls(self) -> tuple[int, ...]:
        if self.kind in (GateKind.CNOT, GateKind.CCX, GateKind.MCX):
            return self.qubits[:-1]
        return ()

    @property
    def target(self) -> int:
        return self.qubits[-1]

    def check(self, qubit_count: int) -> None:
        if max(self.qubits) >= qubit_count:
            raise BadWiring(
                f"{self.kind.value}{self.qubits} exceeds a {qubit_count}-qubit register"
            )


@dataclass
class Circuit:
    qubit_count: int
    ops: list[GateOp] = field(default_factory=list)

    def __post_init__(self):
        for op in self.ops:
            op.check(self.qubit_count)

    def append(self, kind: GateKind | str, *qubits: int) -> None:
        op = GateOp(GateKind(kind), qubits)
        op.check(self.qubit_count)
        self.ops.append(op)

    def extend(self, ops: Iterable[GateOp]) -> None:
        for op in ops:
            op.check(self.qubit_count)
            self.ops.append(op)

    def inverse(self) -> "Circuit":
        """Reverse the op list.  Every supported kind is self-inverse."""
        return Circuit(self.qubit_count, list(reversed(self.ops)))

    def remap(self, mapping: Mapping[int, int] | Sequence[int], qubit_count: int) -> "Circuit":
        ops = [GateOp(op.kind, tuple(mapping[q] for q in op.qubits)) for op in self.ops]
        return Circuit(qubit_count, ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)


@dataclass
class StateVector:
    qubit_count: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.qubit_count,):
            raise ValueError(
                f"expected {1 << self.qubit_count} amplitudes, got shape {self.amplitudes.shape}"
            )

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128).ravel()
        q = int(amps.size).bit_length() - 1
        if q < 1 or amps.size != 1 << q:
            raise ValueError(f"amplitude count {amps.size} is not a power of two >= 2")
        return cls(q, amps)

    def copy(self) -> "StateVector":
        return StateVector(self.qubit_count, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def tensor(self) -> np.ndarray:
        """View with one length-2 axis per qubit; qubit k is axis ``Q-1-k``."""
        return self.amplitudes.reshape((2,) * self.qubit_count)


def _axis(qubit_count: int, qubit: int) -> int:
    return qubit_count - 1 - qubit


def encode_bits(bits: str) -> int:
    """Register-order bitstring (char k = qubit k) to basis index."""
    return sum(1 << k for k, ch in enumerate(bits) if ch == "1")


def decode_index(index: int, width: int) -> str:
    return "".join("1" if (index >> k) & 1 else "0" for k in range(width))


def new_state(qubit_count: int) -> StateVector:
    if qubit_count < 1:
        raise ValueError("qubit_count must be >= 1")
    if qubit_count > MAX_QUBITS:
        raise CapExceeded(f"{qubit_count} qubits exceeds the dense cap of {MAX_QUBITS}")
    amps = np.zeros(1 << qubit_count, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(qubit_count, amps)


def cpi_matrix() -> np.ndarray:
    """Controlled phase inversion in the 3-qubit basis |f u i>, f most significant."""
    return np.diag([1, 1, 1, 1, 1, 1, -1, -1]).astype(np.complex128)


def _apply_inplace(t: np.ndarray, op: GateOp, q: int) -> None:
    # t is the (2,)*q tensor view of the amplitude array
    base: list = [slice(None)] * q
    kind = op.kind
    if kind in (GateKind.X, GateKind.CNOT, GateKind.CCX, GateKind.MCX):
        for c in op.controls:
            base[_axis(q, c)] = 1
        ax = _axis(q, op.target)
        i0, i1 = list(base), list(base)
        i0[ax], i1[ax] = 0, 1
        i0, i1 = tuple(i0), tuple(i1)
        tmp = t[i0].copy()
        t[i0] = t[i1]
        t[i1] = tmp
    elif kind is GateKind.H:
        ax = _axis(q, op.target)
        i0, i1 = list(base), list(base)
        i0[ax], i1[ax] = 0, 1
        i0, i1 = tuple(i0), tuple(i1)
        a0 = t[i0].copy()
        a1 = t[i1].copy()
        t[i0] = (a0 + a1) * _SQRT1_2
        t[i1] = (a0 - a1) * _SQRT1_2
    elif kind is GateKind.CZ:
        for c in op.qubits:
            base[_axis(q, c)] = 1
        t[tuple(base)] *= -1
    elif kind is GateKind.CPI:
        f, u, _ = op.qubits
        base[_axis(q, f)] = 1
        base[_axis(q, u)] = 1
        t[tuple(base)] *= -1
    else:  # pragma: no cover
        raise BadWiring(f"unknown gate kind {kind}")


def apply_gate(state: StateVector, op: GateOp) -> StateVector:
    op.check(state.qubit_count)
    out = state.copy()
    _apply_inplace(out.tensor(), op, out.qubit_count)
    return out


def run_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    if circuit.qubit_count != state.qubit_count:
        raise BadWiring(
            f"circuit has {circuit.qubit_count} qubits, state has {state.qubit_count}"
        )
    out = state.copy()
    t = out.tensor()
    for op in circuit.ops:
        op.check(out.qubit_count)
        _apply_inplace(t, op, out.qubit_count)
    return out


def renormalize(state: StateVector, tol: float = DEGENERACY_TOL) -> tuple[StateVector, float]:
    prior = state.norm()
    if prior <= tol:
        raise DegenerateCancellation(f"state norm {prior:.3e} is at or below {tol:g}")
    return StateVector(state.qubit_count, state.amplitudes / prior), prior


def probability_of(state: StateVector, constraints: Mapping[int, int]) -> float:
    """Total probability of basis states agreeing with a partial assignment."""
    q = state.qubit_count
    idx: list = [slice(None)] * q
    for qubit, bit in constraints.items():
        if not 0 <= qubit < q:
            raise BadWiring(f"qubit {qubit} outside a {q}-qubit register")
        idx[_axis(q, qubit)] = int(bit)
    p = float(np.sum(np.abs(state.tensor()[tuple(idx)]) ** 2))
    return min(max(p, 0.0), 1.0)


def marginal(state: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Distribution over a sub-register; entry ``v`` has bit j equal to ``qubits[j]``."""
    q = state.qubit_count
    keep = [_axis(q, k) for k in qubits]
    if len(set(keep)) != len(keep):
        raise BadWiring("repeated qubit in marginal")
    p = np.abs(state.tensor()) ** 2
    others = tuple(a for a in range(q) if a not in keep)
    m = p.sum(axis=others) if others else p
    remaining = sorted(keep)
    perm = [remaining.index(a) for a in reversed(keep)]
    return np.transpose(m, perm).reshape(-1)


def sample_measurement(state: StateVector, seed) -> str:
    """Draw one full-register outcome.  ``seed`` is anything numpy accepts as a seed."""
    rng = np.random.default_rng(seed)
    cum = np.cumsum(state.probabilities())
    k = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    k = min(k, cum.size - 1)
    return decode_index(k, state.qubit_count)


def _fmt_amp(a: complex) -> str:
    if abs(a.imag) < 1e-12:
        return f"{a.real:+.6f}"
    return f"({a.real:+.6f}{a.imag:+.6f}j)"


def format_ket(state: StateVector, order: Sequence, tol: float = 1e-12) -> str:
    """Render nonzero amplitudes as kets whose characters follow ``order``.

    ``order`` is a list of qubits, or a list of qubit groups printed with ``;``
    between groups.  Qubits left out are not shown, so only omit qubits whose
    value is implied by the displayed ones.
    """
    groups = [list(g) if isinstance(g, (list, tuple)) else [g] for g in order]
    sep = ";" if any(isinstance(g, (list, tuple)) for g in order) else ""
    terms = []
    for k in np.flatnonzero(np.abs(state.amplitudes) > tol):
        ket = sep.join("".join(str((int(k) >> w) & 1) for w in g) for g in groups)
        terms.append((ket, _fmt_amp(complex(state.amplitudes[k]))))
    terms.sort()
    return " ".join(f"{amp}|{ket}>" for ket, amp in terms) or "0"
