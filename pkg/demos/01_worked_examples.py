""" Demo 1: the two one-qubit cases, stage by stage.

Each stage prints the dense state in |f u i> order: f is the inverse-oracle
output, u the unentangled control and i the measured copy of the input.
"""
from nlsat.oracles import OneHitSpec
from nlsat.pipeline import onehit_trace, run_onehit

for target in ("0", "1"):
    print(f"--- accepted input i = {target}")
    for label, ket in onehit_trace(OneHitSpec(1, target)):
        print(f"  {label:28s} {ket}")
    result = run_onehit(OneHitSpec(1, target), backend="dense")
    print(f"  P(i = {target}) = {result.success_probability:.12f}")

# two input bits: the trace keeps e1 and e2 separate so the pairing is visible
print("--- N = 2, accepted input 10")
for label, ket in onehit_trace(OneHitSpec(2, "10")):
    print(f"  {label:28s} {ket}")
