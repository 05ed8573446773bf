""" Demo 2: one-hit success probability on the three backends.

dense simulates every wire, structured keeps the (e, u) table only and analytic
skips simulation altogether.  All three should report probability 1.
"""
import time

import numpy as np

from nlsat.oracles import OneHitSpec
from nlsat.pipeline import run_onehit

rng = np.random.default_rng(0)
print(f"{'N':>2} {'backend':>10} {'P(success)':>14} {'seconds':>9}")
for n in range(1, 9):
    target = "".join(rng.choice(["0", "1"], size=n))
    for backend in ("dense", "structured", "analytic"):
        if backend == "dense" and 3 * n + 1 > 22:   # keep the demo under ~64 MB
            continue
        t0 = time.perf_counter()
        r = run_onehit(OneHitSpec(n, target), backend=backend)
        print(f"{n:>2} {backend:>10} {r.success_probability:>14.12f} {time.perf_counter() - t0:>9.4f}")
