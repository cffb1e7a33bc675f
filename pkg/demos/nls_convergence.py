"""Global order of Lawson methods for the cubic nonlinear Schrodinger equation.

Smooth data (alpha = 6) lets the classical orders show up; the
reference is Lawson-RK4 with a much smaller step, checked by step halving.
Takes roughly half a minute.
"""
from lawsonlab.harness import ExperimentConfig, run_convergence

cfg = ExperimentConfig(problem="nls", beta=1.0, N=256, alphas=(6,),
                       methods=("lawson-euler", "lawson-heun2", "lawson-rk4"))
rep = run_convergence(cfg)
print(rep.summary())
print(f"reference accuracy estimate {rep.reference_accuracy[6.0]:.1e}")
for c in rep.cells:
    print(f"  {c.method:<13} tau={c.tau:<11g} error={c.error:9.2e}  excluded={c.excluded}")
