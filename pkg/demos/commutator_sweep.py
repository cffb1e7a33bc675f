"""How the commutator conditions behave as the number of Fourier modes grows.

For the linear problem the first condition is the sup over sampled
sigma, t of ||e^{-(1-sigma)tau A} [A, B] e^{-sigma tau A} u(t)||.  Bounded in N
means the condition holds uniformly; growth means it fails for the
limit problem.
"""
import numpy as np

from lawsonlab.diagnostics import lie_commutator_definition, lie_commutator_nls, regularity_sweep
from lawsonlab.spectral import LinearProblem, NLSProblem, l2_norm, sample_initial_data

Ns = [128, 256, 512]
for potential in ("sin", "quad"):
    for alpha in (0, 1, 3):
        rep = regularity_sweep("linear-o1", lambda N: LinearProblem(N, potential), alpha, Ns)
        sups = " ".join(f"{s:9.3e}" for s in rep.sup_values)
        print(f"{potential:<5} alpha={alpha}  sups {sups}  growth/doubling {rep.growth_rate():.2f}")

# NLS: both forms of the Lie commutator agree on smooth data
u = sample_initial_data(256, 6.0, 0).values
a, b = lie_commutator_nls(u, 1.0), lie_commutator_definition(u, 1.0)
print("closed form vs definition:", l2_norm(a - b) / l2_norm(b))

rep = regularity_sweep("c1-1", lambda N: NLSProblem(N, 1.0), 4.0, [64, 128, 256])
print("NLS c1-1 alpha=4 sups:", np.round(rep.sup_values, 4))
