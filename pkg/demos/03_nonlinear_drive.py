""" Demo 3: ideal versus iterated nonlinear drive.

The iterated drive repeatedly moves a fraction eta = sin(epsilon) of the |1>
branch onto |0>.  Near convergence the residual shrinks by (1 - eta) per step,
but early steps can grow it when the two branches interfere destructively.
"""
import numpy as np

from nlsat.nonlinear import NonlinearConfig, drive_ideal, drive_iterated, partial_merge, residual
from nlsat.state import StateVector

s2 = 1 / np.sqrt(2)
states = {
    "constructive (|0>+|1>)/sqrt2": StateVector(1, [s2, s2]),
    "mostly |1>, same sign": StateVector(1, [0.3, np.sqrt(1 - 0.09)]),
    "opposite sign (0.8|0> - 0.6|1>)": StateVector(1, [0.8, -0.6]),
}
eta = NonlinearConfig("iterated").eta
print(f"eta = {eta:.5f}")
for name, s in states.items():
    r0 = residual(s, 0)
    row = [residual(partial_merge(s, 0, eta, t), 0) for t in (1, 5, 20, 80)]
    bound = [(1 - eta) ** t * r0 for t in (1, 5, 20, 80)]
    print(f"{name}")
    print("   residual      " + "  ".join(f"{v:.2e}" for v in row))
    print("   (1-eta)^T r0  " + "  ".join(f"{v:.2e}" for v in bound))

# on two qubits the driven qubit's branches are vectors, so the two modes can differ
pair = StateVector(2, [0.5, 0.1 + 0.4j, -0.3, 0.7])
pair = StateVector(2, pair.amplitudes / pair.norm())
for eps in (0.05, 0.1, 0.3, 0.7):
    cfg = NonlinearConfig("iterated", epsilon=eps, residual_tol=1e-10)
    s = pair
    out, stats = drive_iterated(s, 0, cfg)
    gap = np.linalg.norm(out.amplitudes - drive_ideal(s, 0)[0].amplitudes)
    print(f"epsilon={eps:<5} steps={stats.steps_used:<5} distance to ideal={gap:.1e}")
