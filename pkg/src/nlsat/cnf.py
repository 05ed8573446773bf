"""3-CNF formulas: DIMACS input/output and brute-force satisfiability.

Variables are numbered from 1 in DIMACS and in clause literals; assignments are
0-indexed sequences, so ``x[k]`` is the value of variable ``k + 1``.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapExceeded, ParseError

BRUTE_FORCE_CAP = 24
MAX_CLAUSE_LEN = 3

Assignment = tuple[int, ...]


@dataclass(frozen=True)
class CnfFormula:
    var_count: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(int(l) for l in c) for c in self.clauses))
        if self.var_count < 1:
            raise ValueError("var_count must be >= 1")
        if not self.clauses:
            raise ValueError("formula needs at least one clause")
        for c in self.clauses:
            if not 1 <= len(c) <= MAX_CLAUSE_LEN:
                raise ValueError(f"clause {c} must have 1..{MAX_CLAUSE_LEN} literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.var_count:
                    raise ValueError(f"literal {lit} out of range for {self.var_count} variables")

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.var_count} {len(self.clauses)}"]
        lines += [" ".join(str(l) for l in c) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_dimacs().encode()).hexdigest()


def parse_dimacs(text: str | bytes) -> CnfFormula:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    current_start = 0
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise ParseError("duplicate 'p' header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if n < 1:
                raise ParseError("variable count must be >= 1", lineno)
            if m < 1:
                raise ParseError("formula declares zero clauses", lineno)
            header = (n, m)
            continue
        if header is None:
            raise ParseError("clause data before 'p cnf' header", lineno)
        n, m = header
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"unexpected token {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", lineno)
                if len(clauses) >= m:
                    raise ParseError(f"more than the declared {m} clauses", lineno)
                clauses.append(tuple(current))
                current = []
                continue
            if abs(lit) > n:
                raise ParseError(f"literal {lit} out of range for {n} variables", lineno)
            if not current:
                current_start = lineno
            current.append(lit)
            if len(current) > MAX_CLAUSE_LEN:
                raise ParseError(f"clause longer than {MAX_CLAUSE_LEN} literals", lineno)
    if header is None:
        raise ParseError("missing 'p cnf' header", lineno or None)
    if current:
        raise ParseError("unterminated clause (missing trailing 0)", current_start)
    if len(clauses) != header[1]:
        raise ParseError(f"expected {header[1]} clauses, found {len(clauses)}", lineno)
    return CnfFormula(header[0], tuple(clauses))


def eval_formula(formula: CnfFormula, x: Sequence[int]) -> bool:
    if len(x) != formula.var_count:
        raise ValueError(f"assignment has {len(x)} bits, formula has {formula.var_count} variables")
    return all(
        any(bool(x[abs(l) - 1]) == (l > 0) for l in clause) for clause in formula.clauses
    )


def satisfying_mask(formula: CnfFormula) -> np.ndarray:
    """Boolean array over all assignments; index bit k holds variable k + 1."""
    n = formula.var_count
    if n > BRUTE_FORCE_CAP:
        raise CapExceeded(f"{n} variables exceeds the brute-force cap of {BRUTE_FORCE_CAP}")
    idx = np.arange(1 << n, dtype=np.int64)
    bits = [((idx >> k) & 1).astype(bool) for k in range(n)]
    sat = np.ones(1 << n, dtype=bool)
    for clause in formula.clauses:
        c = np.zeros(1 << n, dtype=bool)
        for l in clause:
            c |= bits[abs(l) - 1] if l > 0 else ~bits[abs(l) - 1]
        sat &= c
    return sat


def count_satisfying(formula: CnfFormula) -> int:
    return int(np.count_nonzero(satisfying_mask(formula)))


def brute_force_sat(formula: CnfFormula) -> tuple[bool, Assignment | None]:
    """Exhaustive search; the witness is lexicographically first in (x1, x2, ...)."""
    if formula.var_count > BRUTE_FORCE_CAP:
        raise CapExceeded(
            f"{formula.var_count} variables exceeds the brute-force cap of {BRUTE_FORCE_CAP}"
        )
    for x in itertools.product((0, 1), repeat=formula.var_count):
        if eval_formula(formula, x):
            return True, x
    return False, None


def random_3cnf(var_count: int, clause_count: int, rng: np.random.Generator) -> CnfFormula:
    """Uniform random clauses of three distinct variables with random signs."""
    k = min(3, var_count)
    clauses = []
    for _ in range(clause_count):
        vs = rng.choice(var_count, size=k, replace=False) + 1
        signs = rng.choice((-1, 1), size=k)
        clauses.append(tuple(int(v * s) for v, s in zip(vs, signs)))
    return CnfFormula(var_count, tuple(clauses))
