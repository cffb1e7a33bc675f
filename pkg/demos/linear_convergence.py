"""Lawson-Euler against exponential Euler on the linear Schrodinger equation.

With f(x) = sin(x) the potential is smooth and periodic; with (x/pi)^2 its
periodic extension has a kink, which hurts exponential Euler much more
than Lawson-Euler.  Errors are max over the time grid of the discrete L2
error against an exact eigen-decomposition solution.
"""
from lawsonlab.harness import ExperimentConfig, run_convergence

N = 256
for potential in ("sin", "quad"):
    rep = run_convergence(ExperimentConfig(potential=potential, N=N, alphas=(0, 1, 2, 3)))
    print(rep.summary())
    for method in rep.config.methods:
        for alpha in rep.config.alphas:
            errs = " ".join(f"{e:8.1e}" for _, e in rep.series(method, alpha))
            print(f"    {method:<13} alpha={alpha:g}  {errs}")

# rough data with sin potential at N = 256: Lawson-Euler only shows order
# reduction while tau > 2 pi / N, so most of the ladder sits past it
rep = run_convergence(ExperimentConfig(potential="sin", N=N, alphas=(0,), methods=("lawson-euler",),
                                       tau_max_exp=2, tau_min_exp=5))
print("coarse steps only:", rep.summary().splitlines()[1].strip())
