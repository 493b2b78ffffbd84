"""Network density drives believer prevalence on Erdos-Renyi graphs.

A scaled-down version of the fig2b sweep: denser networks end up with a
larger believer share, at every gullibility level that sustains the hoax.
"""

import numpy as np

from hoaxnet import ERGraphSpec, InitialCondition, ModelParams, ensemble

N = 500
STEPS = 400
ITERATIONS = 10
ic = InitialCondition(believer_fraction=0.01)

print(f"Final believer share, n={N}, {ITERATIONS} iterations, {STEPS} steps")
print(f"{'alpha':>6} " + " ".join(f"{'p=' + str(p):>9}" for p in (0.004, 0.008, 0.016, 0.032)))
for alpha in (0.3, 0.5, 0.7):
    params = ModelParams(beta=0.5, alpha=alpha, p_verify=0.05, p_forget=0.1)
    cells = []
    for p in (0.004, 0.008, 0.016, 0.032):
        stats = ensemble(ERGraphSpec(N, p), params, ic, STEPS, ITERATIONS, master_seed=1)
        cells.append(f"{stats.mean_global:>9.2%}")
    print(f"{alpha:>6} " + " ".join(cells))

print()
print("Each column is denser than the last; read across a row to see the")
print("density effect, and down a column to see the gullibility effect.")
