"""Discrete Sobolev norms of random initial data as the grid is refined.

Norms of order mu <= alpha stay put when N grows; norms of order
mu >= alpha + 1 keep growing, since the data only has alpha derivatives.
"""
import numpy as np

from lawsonlab.harness import run_regularity

Ns = [128, 256, 512, 1024, 2048]
mus = [0, 1, 2, 3]

for alpha in (0, 1, 2):
    rows = run_regularity(alpha, mus, Ns, seed=0)
    print(f"alpha = {alpha}")
    print("   N  " + "".join(f"  mu={mu:<7}" for mu in mus))
    for N in Ns:
        norms = [r.norm for r in rows if r.N == N]
        print(f"{N:5d} " + "".join(f"{x:11.3e}" for x in norms))
    growth = [np.log2(rows[-len(mus) + k].norm / rows[k].norm) / np.log2(Ns[-1] / Ns[0])
              for k in range(len(mus))]
    print("  growth exponent in N:", np.round(growth, 2))
