""" Demo 5: size of the synthesized 3SAT inverse oracle.

Gate counts grow linearly in the number of clauses.  Lowering the wide MCX
gates to Toffoli chains adds ancillas and gates but keeps the growth linear.
"""
import numpy as np

from nlsat.cli import scaling_rows
from nlsat.cnf import CnfFormula
from nlsat.oracles import emit_circuit, synth_sat_inverse_oracle, verify_synthesis

rows = list(scaling_rows(8, 40, seed=1))
low = list(scaling_rows(8, 40, seed=1, lowered=True))
print(f"{'m':>3} {'gates':>6} {'lowered':>8} {'ancillas':>9} {'depth':>6}")
for r, l in zip(rows[::5], low[::5]):
    print(f"{r['clauses']:>3} {r['gates']:>6} {l['gates']:>8} {r['ancillas']:>9} {r['depth']:>6}")

m = np.array([r["clauses"] for r in rows])
g = np.array([r["gates"] for r in rows])
a, b = np.polyfit(m, g, 1)
print(f"fit: gates = {a:.2f} * m + {b:.1f}")

f = CnfFormula(3, ((1, -2, 3), (-1, 2)))
prog = synth_sat_inverse_oracle(f)
print(emit_circuit(prog))
print("exhaustive check:", "ok" if verify_synthesis(prog).ok else "FAILED")
