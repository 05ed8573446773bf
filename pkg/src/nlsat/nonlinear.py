"""Nonlinear driving of a qubit into |0>.

Write the state as ``|0>_q (x) psi0 + |1>_q (x) psi1``.  The ideal drive maps it
to the normalization of ``|0>_q (x) (psi0 + psi1)``: branches that agree add up
and branches of opposite sign cancel.  The iterated drive approaches the same
point through repeated partial merges

    psi0 <- psi0 + eta * psi1,    psi1 <- (1 - eta) * psi1

renormalizing after each step.  ``eta`` defaults to ``sin(epsilon)`` where
``epsilon`` is how far short of a quarter turn each basis state is rotated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BudgetExhausted, DegenerateCancellation
from .state import DEGENERACY_TOL, StateVector, _axis

MODES = ("ideal", "iterated")
_UNIT_SLACK = 8 * np.finfo(float).eps


@dataclass(frozen=True)
class NonlinearConfig:
    mode: str = "ideal"
    epsilon: float = 0.1
    eta: float | None = None
    max_steps: int = 10_000
    residual_tol: float = 1e-10

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0.0 < self.epsilon < math.pi / 4:
            raise ValueError(f"epsilon must lie in (0, pi/4), got {self.epsilon}")
        if self.eta is None:
            object.__setattr__(self, "eta", math.sin(self.epsilon))
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.residual_tol <= 0:
            raise ValueError("residual_tol must be > 0")

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "epsilon": self.epsilon,
            "eta": self.eta,
            "max_steps": self.max_steps,
            "residual_tol": self.residual_tol,
        }


@dataclass
class DriveStats:
    steps_used: int
    final_residual: float
    prior_norm: float


def _halves(t: np.ndarray, q: int, qubit: int):
    ax = _axis(q, qubit)
    i0: list = [slice(None)] * q
    i1: list = [slice(None)] * q
    i0[ax], i1[ax] = 0, 1
    return tuple(i0), tuple(i1)


def residual(state: StateVector, qubit: int) -> float:
    """Norm of the qubit=1 component of the normalized state."""
    t = state.tensor()
    _, i1 = _halves(t, state.qubit_count, qubit)
    total = np.linalg.norm(state.amplitudes)
    if total == 0.0:
        return 0.0
    return float(np.linalg.norm(t[i1]) / total)


def drive_ideal(state: StateVector, qubit: int) -> tuple[StateVector, DriveStats]:
    out = state.copy()
    t = out.tensor()
    i0, i1 = _halves(t, out.qubit_count, qubit)
    t[i0] += t[i1]
    t[i1] = 0.0
    norm = float(np.linalg.norm(out.amplitudes))
    if norm <= DEGENERACY_TOL:
        raise DegenerateCancellation(
            f"merging qubit {qubit} cancelled the state (norm {norm:.3e})"
        )
    # leaves an already-driven state bit-identical, so the drive is exactly idempotent
    if abs(norm - 1.0) > _UNIT_SLACK:
        out.amplitudes /= norm
    return out, DriveStats(0, 0.0, norm)


def _merge_step(out: StateVector, t: np.ndarray, i0, i1, eta: float) -> None:
    t[i0] += eta * t[i1]
    t[i1] *= 1.0 - eta
    n = float(np.linalg.norm(out.amplitudes))
    if n <= DEGENERACY_TOL:
        raise DegenerateCancellation("partial merge cancelled the state")
    out.amplitudes /= n


def partial_merge(state: StateVector, qubit: int, eta: float, steps: int = 1) -> StateVector:
    """Apply ``steps`` renormalized smooth merge steps, without the final projection."""
    out = state.copy()
    out.amplitudes /= out.norm()
    t = out.tensor()
    i0, i1 = _halves(t, out.qubit_count, qubit)
    for _ in range(steps):
        _merge_step(out, t, i0, i1, eta)
    return out


def drive_iterated(
    state: StateVector, qubit: int, config: NonlinearConfig
) -> tuple[StateVector, DriveStats]:
    out = state.copy()
    t = out.tensor()
    i0, i1 = _halves(t, out.qubit_count, qubit)

    scale = float(np.linalg.norm(out.amplitudes))
    merged = float(np.linalg.norm(t[i0] + t[i1]))
    # the recurrence stalls rather than fails on the cancelling fixed point
    if merged <= DEGENERACY_TOL * max(scale, 1.0):
        raise DegenerateCancellation(
            f"merging qubit {qubit} cancelled the state (norm {merged:.3e})"
        )

    eta = config.eta
    out.amplitudes /= scale
    res = float(np.linalg.norm(t[i1]))
    steps = 0
    while res > config.residual_tol and steps < config.max_steps:
        _merge_step(out, t, i0, i1, eta)
        res = float(np.linalg.norm(t[i1]))
        steps += 1
    if res > config.residual_tol:
        raise BudgetExhausted(
            f"residual {res:.3e} > {config.residual_tol:g} after {steps} steps (eta={eta:g})"
        )

    t[i1] = 0.0
    prior = float(np.linalg.norm(out.amplitudes))
    out.amplitudes /= prior
    return out, DriveStats(steps, res, prior)


def drive(state: StateVector, qubit: int, config: NonlinearConfig | None = None):
    if config is None or config.mode == "ideal":
        return drive_ideal(state, qubit)
    return drive_iterated(state, qubit, config)


def drive_register(
    state: StateVector, qubits: Sequence[int], config: NonlinearConfig | None = None
) -> tuple[StateVector, list[DriveStats]]:
    """Drive each listed qubit to |0>, in ascending index order."""
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"repeated qubit in {list(qubits)}")
    stats = []
    for q in sorted(qubits):
        state, s = drive(state, q, config)
        stats.append(s)
    return state, stats
