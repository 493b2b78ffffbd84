"""Tour of the transition kernel: exposure probabilities and single steps.

A susceptible node weighs believing neighbors by (1 + alpha) and
fact-checking ones by (1 - alpha); beta scales the total probability of
leaving the susceptible state. Run me with `python demos/demo_dynamics.py`.
"""

import numpy as np

from hoaxnet import (
    Graph,
    ModelParams,
    NeighborTally,
    belief_probability,
    factcheck_probability,
    states_from_string,
    states_to_string,
    step,
)

params = ModelParams(beta=0.5, alpha=0.3, p_verify=0.05, p_forget=0.1)

print("Exposure probabilities at beta=0.5, alpha=0.3")
print(f"{'believers':>10} {'checkers':>9} {'P(adopt)':>10} {'P(check)':>10}")
for n_b, n_f in [(0, 0), (1, 0), (0, 1), (2, 1), (1, 2), (3, 3), (10, 1)]:
    tally = NeighborTally(n_b, n_f)
    adopt = belief_probability(params, tally)
    check = factcheck_probability(params, tally)
    print(f"{n_b:>10} {n_f:>9} {adopt:>10.4f} {check:>10.4f}")
print("The two exits always sum to beta once any exposure exists.\n")

# One synchronous step on a small star: the hub believes, leaves react.
hub_and_leaves = Graph.from_edges(6, [(0, j) for j in range(1, 6)])
states = states_from_string("BSSSSF")
print("Star graph, hub believes, one fact-checking leaf:")
print("  t=0:", states_to_string(states))
rng = np.random.default_rng(7)
for t in range(1, 6):
    states = step(hub_and_leaves, states, params, rng)
    print(f"  t={t}:", states_to_string(states))
