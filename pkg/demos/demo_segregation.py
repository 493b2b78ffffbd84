"""A denser minority raises believer prevalence inside the majority.

Two-block networks: the minority (20% of nodes) gets denser while the
majority's own density and the sparse cross-group links stay fixed. The
believer share inside the majority rises anyway - the cross-group effect.
Scaled-down version of the fig3 preset.
"""

from hoaxnet import BlockMatrix, InitialCondition, ModelParams, SBMGraphSpec, ensemble

N = 1000
STEPS = 500
ITERATIONS = 15
params = ModelParams(beta=0.5, alpha=0.3, p_verify=0.05, p_forget=0.1)
ic = InitialCondition(believer_fraction=0.01)

print(f"n={N}, minority 20%, h11=0.007, h01=0.002, {ITERATIONS} iterations")
print(f"{'h00':>6} {'believers (minority)':>22} {'believers (majority)':>22}")
for h00 in (0.01, 0.02, 0.04, 0.07, 0.10):
    spec = SBMGraphSpec(N, 0.2, BlockMatrix(h00=h00, h01=0.002, h11=0.007))
    stats = ensemble(spec, params, ic, STEPS, ITERATIONS, master_seed=3)
    print(f"{h00:>6} {stats.mean_minority:>22.2%} {stats.mean_majority:>22.2%}")

print()
print("Only the minority's internal density changed, yet the majority's")
print("believer share climbs several-fold.")
