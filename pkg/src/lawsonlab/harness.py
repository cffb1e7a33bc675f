"""Experiment driver: order certificates, convergence studies, regularity sweeps.

Every experiment writes flat CSV files whose first line is ``# lawson-lab v1``
and whose rows carry the provenance needed to rerun them (seed, N, method,
alpha, tau).  Identical configurations produce byte-identical files.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError, DegenerateInput, NonFiniteState
from .integrators import integrate, method_config
from .rk_tableau import load_tableau
from .spectral import (
    LinearProblem, NLSProblem, ReferenceSolution, l2_norm, reference_trajectory,
    sample_initial_data, sobolev_norm,
)
from .trees import OrderCertificate, check_order

CSV_HEADER = "# lawson-lab v1"
SATURATION_FACTOR = 10.0
MIN_FIT_POINTS = 4


def estimate_order(points: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares slope of ``log(error)`` against ``log(tau)`` and the RMS residual.

    Non-positive or non-finite errors are dropped before fitting.
    """
    pts = [(t, e) for t, e in points if t > 0 and e > 0 and np.isfinite(e)]
    if len(pts) < 2:
        raise DegenerateInput(f"need at least 2 usable (tau, error) points, got {len(pts)}")
    x = np.log([t for t, _ in pts])
    y = np.log([e for _, e in pts])
    if np.ptp(x) == 0:
        raise DegenerateInput("all step sizes are equal")
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), residual


@dataclass
class ExperimentConfig:
    """Convergence experiment description.

    Step sizes are ``2**-k`` for ``k = tau_max_exp, ..., tau_min_exp``.
    """

    problem: str = "linear"
    potential: str = "sin"
    beta: float = 1.0
    N: int = 256
    alphas: tuple[float, ...] = (0.0, 1.0, 2.0, 3.0)
    methods: tuple[str, ...] = ("lawson-euler", "exp-euler")
    tau_max_exp: int = 4
    tau_min_exp: int = 10
    T: float = 1.0
    seed: int = 0
    out: str | None = None
    workers: int = 1
    reference_method: str = "auto"

    def __post_init__(self):
        self.alphas = tuple(float(a) for a in self.alphas)
        self.methods = tuple(self.methods)
        if self.problem not in ("linear", "nls"):
            raise ConfigError(f"problem must be 'linear' or 'nls', got {self.problem!r}")
        if self.problem == "linear" and self.potential not in ("sin", "quad", "zero"):
            raise ConfigError(f"unknown potential {self.potential!r}")
        if self.N < 4 or self.N % 2:
            raise ConfigError(f"N must be even and >= 4, got {self.N}")
        if not self.T > 0:
            raise ConfigError("T must be positive")
        if self.tau_min_exp <= self.tau_max_exp:
            raise ConfigError("step sizes must be strictly decreasing (tau_min_exp > tau_max_exp)")
        if not self.alphas or any(a < 0 for a in self.alphas):
            raise ConfigError("alpha list must be non-empty and non-negative")
        if not self.methods:
            raise ConfigError("method list must be non-empty")
        for m in self.methods:
            try:
                method_config(m, 1.0, 1)
            except Exception as exc:
                raise ConfigError(str(exc)) from None
        for k in self.step_exponents:
            n = self.T * 2 ** k
            if abs(n - round(n)) > 1e-9:
                raise ConfigError(f"T={self.T} is not a multiple of tau=2^-{k}")

    @property
    def step_exponents(self) -> list[int]:
        return list(range(self.tau_max_exp, self.tau_min_exp + 1))

    @property
    def taus(self) -> list[float]:
        return [2.0 ** -k for k in self.step_exponents]

    def make_problem(self):
        if self.problem == "nls":
            return NLSProblem(self.N, self.beta)
        return LinearProblem(self.N, self.potential)

    def label(self) -> str:
        if self.problem == "nls":
            return f"nls(beta={self.beta:g})"
        return f"linear({self.potential})"


@dataclass(frozen=True)
class ConvergenceCell:
    method: str
    alpha: float
    tau: float
    error: float
    excluded: str = "no"


@dataclass(frozen=True)
class OrderFit:
    slope: float
    residual: float
    n_points: int


@dataclass
class ConvergenceReport:
    config: ExperimentConfig
    cells: list[ConvergenceCell]
    fits: dict[tuple[str, float], OrderFit]
    reference_accuracy: dict[float, float] = field(default_factory=dict)

    def series(self, method: str, alpha: float) -> list[tuple[float, float]]:
        return [(c.tau, c.error) for c in self.cells if c.method == method and c.alpha == alpha]

    def slope(self, method: str, alpha: float) -> float:
        return self.fits[(method, float(alpha))].slope

    def errors_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["method", "alpha", "N", "seed", "tau", "error", "excluded"])
        for c in self.cells:
            w.writerow([c.method, repr(c.alpha), self.config.N, self.config.seed,
                        repr(c.tau), repr(c.error), c.excluded])
        return buf.getvalue()

    def slopes_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["method", "alpha", "slope", "residual", "n_points"])
        for (method, alpha), fit in self.fits.items():
            w.writerow([method, repr(alpha), repr(fit.slope), repr(fit.residual), fit.n_points])
        return buf.getvalue()

    def write(self, path: str | Path) -> tuple[Path, Path]:
        path = Path(path)
        slopes = path.with_name(path.stem + "-slopes" + path.suffix)
        path.write_text(self.errors_csv())
        slopes.write_text(self.slopes_csv())
        return path, slopes

    def summary(self) -> str:
        lines = [f"{self.config.label()}  N={self.config.N}  T={self.config.T:g}  seed={self.config.seed}"]
        for (method, alpha), fit in self.fits.items():
            lines.append(f"  {method:<16} alpha={alpha:<4g} observed order {fit.slope:7.3f}"
                         f"  (residual {fit.residual:.3f}, {fit.n_points} points)")
        return "\n".join(lines)


def _run_cell(problem, method, T, tau, u0, ref: ReferenceSolution, tau_min):
    n = round(T / tau)
    stride = round(tau / tau_min)
    try:
        traj = integrate(problem, method_config(method, T, n), u0)
    except NonFiniteState:
        return float("nan"), "blowup"
    err = 0.0
    for k, state in enumerate(traj.states):
        err = max(err, l2_norm(state - ref.states[k * stride]))
    if not np.isfinite(err):
        return float("nan"), "blowup"
    if err < SATURATION_FACTOR * ref.accuracy:
        return err, "saturated"
    return err, "no"


def run_convergence(config: ExperimentConfig) -> ConvergenceReport:
    """Integrate every (method, alpha, tau) cell and fit observed orders.

    The error of a cell is the maximum over all steps of ``||u_n - u(t_n)||_{0,N}``.
    One initial vector per alpha (from ``config.seed``) is shared by all
    methods and step sizes.
    """
    problem = config.make_problem()
    tau_min = min(config.taus)
    cells, fits, accuracy = [], {}, {}
    for alpha in config.alphas:
        u0 = sample_initial_data(problem.grid, alpha, config.seed).values
        ref = reference_trajectory(problem, u0, config.T, tau_min=tau_min,
                                   method=config.reference_method)
        accuracy[alpha] = ref.accuracy
        jobs = [(m, tau) for m in config.methods for tau in config.taus]
        if config.workers > 1:
            with ThreadPoolExecutor(max_workers=config.workers) as pool:
                results = list(pool.map(
                    lambda job: _run_cell(problem, job[0], config.T, job[1], u0, ref, tau_min), jobs))
        else:
            results = [_run_cell(problem, m, config.T, tau, u0, ref, tau_min) for m, tau in jobs]
        for (method, tau), (err, excl) in zip(jobs, results):
            cells.append(ConvergenceCell(method, alpha, tau, err, excl))
    for method in config.methods:
        for alpha in config.alphas:
            usable = [(c.tau, c.error) for c in cells
                      if c.method == method and c.alpha == alpha and c.excluded == "no"]
            if len(usable) >= MIN_FIT_POINTS:
                slope, resid = estimate_order(usable)
            else:
                slope, resid = float("nan"), float("nan")
            fits[(method, alpha)] = OrderFit(slope, resid, len(usable))
    cells.sort(key=lambda c: (config.methods.index(c.method), c.alpha, -c.tau))
    report = ConvergenceReport(config, cells, fits, accuracy)
    if config.out:
        report.write(config.out)
    return report


@dataclass(frozen=True)
class RegularityRow:
    alpha: float
    mu: float
    N: int
    seed: int
    norm: float


def run_regularity(alpha: float, mu_list: Sequence[float], N_list: Sequence[int],
                   seed: int = 0) -> list[RegularityRow]:
    """Discrete Sobolev norms of a fresh random initial vector for every ``N``."""
    if not len(mu_list) or not len(N_list):
        raise ConfigError("mu and N lists must be non-empty")
    rows = []
    for N in N_list:
        v = sample_initial_data(N, alpha, seed).values
        for mu in mu_list:
            rows.append(RegularityRow(float(alpha), float(mu), int(N), seed, sobolev_norm(v, mu)))
    return rows


def regularity_csv(rows: Sequence[RegularityRow]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "mu", "N", "seed", "norm"])
    for r in rows:
        w.writerow([repr(r.alpha), repr(r.mu), r.N, r.seed, repr(r.norm)])
    return buf.getvalue()


def run_check_order(tableau: str, p_max: int = 5) -> tuple[OrderCertificate, str, str]:
    """Load a tableau (builtin name or file), certify it; return (certificate, text, csv row)."""
    tab = load_tableau(tableau)
    cert = check_order(tab, p_max)
    witness = str(cert.first_failure[0]) if cert.first_failure else ""
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(
        [cert.tableau_id, cert.max_order_checked, cert.certified_order, witness])
    return cert, cert.report(), buf.getvalue()
