"""Simulator for nonlinear one-hit oracles and the 3SAT decision procedure built on them."""
from .cnf import CnfFormula, brute_force_sat, count_satisfying, eval_formula, parse_dimacs
from .errors import (
    BadWiring,
    BudgetExhausted,
    CapExceeded,
    DegenerateCancellation,
    IntegrityError,
    NoZeros,
    ParseError,
)
from .nonlinear import NonlinearConfig, drive_ideal, drive_iterated, drive_register, residual
from .oracles import (
    OneHitSpec,
    gate_census,
    synth_equality_inverse_oracle,
    synth_sat_inverse_oracle,
    truth_function,
    verify_synthesis,
)
from .pipeline import build_global_unitary, run_onehit, run_sat_trial, solve_sat
from .state import Circuit, GateKind, GateOp, StateVector, apply_gate, new_state, run_circuit

__version__ = "0.1.0"
