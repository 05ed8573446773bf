""" Demo 4: deciding satisfiability by repetition.

For each random formula we compare the exact probability of measuring t=0
against S/(S+1), then run the M-repetition decision and check it against
exhaustive search.
"""
import numpy as np

from nlsat.cnf import brute_force_sat, count_satisfying, random_3cnf
from nlsat.pipeline import sat_t0_probability, solve_sat

rng = np.random.default_rng(42)
print(f"{'n':>2} {'m':>3} {'S':>3} {'P(t=0)':>8} {'S/(S+1)':>8} {'verdict':>7} {'brute':>6}")
for _ in range(12):
    n, m = int(rng.integers(3, 7)), int(rng.integers(5, 30))
    f = random_3cnf(n, m, rng)
    s = count_satisfying(f)
    p = sat_t0_probability(f)
    v = solve_sat(f, M=20, seed=0)
    print(f"{n:>2} {m:>3} {s:>3} {p:>8.5f} {s / (s + 1):>8.5f} {v.verdict:>7} "
          f"{'SAT' if brute_force_sat(f)[0] else 'UNSAT':>6}")

# a single satisfying assignment is the worst case: each run misses it with probability 1/2
from nlsat.cnf import CnfFormula

one = CnfFormula(3, ((1,), (-2,), (3,)))
for M in (1, 3, 5, 8):
    missed = sum(not solve_sat(one, M, seed=b).satisfiable for b in range(4000))
    print(f"M={M}: missed {missed / 4000:.4f}  (2^-M = {2.0 ** -M:.4f})")
