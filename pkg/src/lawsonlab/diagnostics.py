"""Commutator diagnostics for the regularity conditions of Lawson methods.

A Lawson method of classical order one keeps order one on a stiff problem
when the Lie commutator ``[F_A, g](w) = A g(w) - g'(w) A w`` stays bounded
along the free flow of the exact solution; order two additionally needs the
double commutator and the two mixed terms built from the derivative of the
commutator.  These quantities are sampled here on finite grids in
``sigma`` and ``t`` and tracked as the number of Fourier modes grows.
Boundedness "independent of ||A||" becomes "does not grow with N".

Nonlinear Schrodinger (``A = -i Laplacian``, ``g(u) = i beta |u|^2 u``)::

    [F_A, g](u) = 2 beta (conj(u) u_x^2 + 2 u |u_x|^2 + u^2 conj(u)_xx)

For the linear problem ``g(u) = B u`` the Lie commutator is the matrix
commutator ``[A, B]``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .spectral import (
    LinearProblem, NLSProblem, SchrodingerProblem, grid_for, l2_norm,
    reference_trajectory, sample_initial_data,
)

CONDITIONS = ("c1-1", "c1-2", "c2-1a", "c2-1b",
              "linear-o1", "linear-o2a", "linear-o2b", "linear-o2c")
_LINEAR_ALIAS = {"linear-o1": "c1-1", "linear-o2a": "c1-2",
                 "linear-o2b": "c2-1a", "linear-o2c": "c2-1b"}
DEFAULT_SIGMAS = (0.0, 0.25, 0.5, 0.75, 1.0)
DEFAULT_T_FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)


def _apply_A(grid, v):
    return grid.apply_symbol(1j * grid.native_modes.astype(float) ** 2, v)


def frechet_g(u: np.ndarray, w: np.ndarray, beta: float) -> np.ndarray:
    """``g'(u) w = i beta (u^2 conj(w) + 2 |u|^2 w)``."""
    return 1j * beta * (u * u * np.conj(w) + 2 * np.abs(u) ** 2 * w)


def second_derivative_g(u, v, w, beta):
    """``g''(u)(v, w) = 2 i beta (u v conj(w) + conj(u) v w + u conj(v) w)``."""
    return 2j * beta * (u * v * np.conj(w) + np.conj(u) * v * w + u * np.conj(v) * w)


def _g(u, beta):
    return 1j * beta * np.abs(u) ** 2 * u


def lie_commutator_nls(u: np.ndarray, beta: float) -> np.ndarray:
    """Closed form of ``[F_A, g](u)`` with spectral derivatives."""
    grid = grid_for(len(u))
    ub = np.conj(u)
    ux = grid.gradient(u)
    ubx = grid.gradient(ub)
    ubxx = grid.laplacian(ub)
    return 2 * beta * (ub * ux * ux + 2 * u * ux * ubx + u * u * ubxx)


def lie_commutator_definition(u: np.ndarray, beta: float) -> np.ndarray:
    """``A g(u) - g'(u) A u``, computed independently of the closed form."""
    grid = grid_for(len(u))
    return _apply_A(grid, _g(u, beta)) - frechet_g(u, _apply_A(grid, u), beta)


def commutator_derivative_nls(u: np.ndarray, w: np.ndarray, beta: float) -> np.ndarray:
    """Derivative of the closed-form commutator at ``u`` in direction ``w``."""
    grid = grid_for(len(u))
    ub, wb = np.conj(u), np.conj(w)
    ux, wx = grid.gradient(u), grid.gradient(w)
    ubx, wbx = grid.gradient(ub), grid.gradient(wb)
    ubxx, wbxx = grid.laplacian(ub), grid.laplacian(wb)
    return 2 * beta * (wb * ux * ux + 2 * ub * ux * wx + 2 * w * ux * ubx
                       + 2 * u * wx * ubx + 2 * u * ux * wbx + u * u * wbxx
                       + 2 * u * w * ubxx)


def commutator_derivative_definition(u, w, beta):
    """``A g'(u) w - g''(u)(A u, w) - g'(u) A w``."""
    grid = grid_for(len(u))
    return (_apply_A(grid, frechet_g(u, w, beta))
            - second_derivative_g(u, _apply_A(grid, u), w, beta)
            - frechet_g(u, _apply_A(grid, w), beta))


def double_commutator_nls(u, beta):
    """``[F_A, [F_A, g]](u) = A C(u) - C'(u) A u`` with ``C`` the first commutator."""
    grid = grid_for(len(u))
    return (_apply_A(grid, lie_commutator_nls(u, beta))
            - commutator_derivative_nls(u, _apply_A(grid, u), beta))


def linear_commutator(u: np.ndarray, problem: LinearProblem, depth: int = 1) -> np.ndarray:
    """``[A_N, B_N] u`` (depth 1) or ``[A_N, [A_N, B_N]] u`` (depth 2)."""
    if depth == 1:
        return problem.apply_A(problem.apply_B(u)) - problem.apply_B(problem.apply_A(u))
    if depth == 2:
        return (problem.apply_A(linear_commutator(u, problem, 1))
                - linear_commutator(problem.apply_A(u), problem, 1))
    raise ValueError("commutator depth must be 1 or 2")


class _Brackets:
    """Uniform access to ``g'``, the commutator, its derivative and the double commutator."""

    def __init__(self, problem):
        self.problem = problem
        if isinstance(problem, LinearProblem):
            self.dg = lambda u, w: problem.apply_B(w)
            self.comm = lambda u: linear_commutator(u, problem, 1)
            self.dcomm = lambda u, w: linear_commutator(w, problem, 1)
            self.comm2 = lambda u: linear_commutator(u, problem, 2)
        elif isinstance(problem, NLSProblem):
            beta = problem.beta
            self.dg = lambda u, w: frechet_g(u, w, beta)
            self.comm = lambda u: lie_commutator_nls(u, beta)
            self.dcomm = lambda u, w: commutator_derivative_nls(u, w, beta)
            self.comm2 = lambda u: double_commutator_nls(u, beta)
        else:
            raise TypeError(f"no commutator formulas for {type(problem).__name__}")


def _sample(cond: str, br: _Brackets, tau: float, u: np.ndarray, s1: float, s2: float | None):
    P = br.problem
    prop = P.apply_propagator
    if cond == "c1-1":
        return prop((1 - s1) * tau, br.comm(prop(s1 * tau, u)))
    if cond == "c1-2":
        return prop((1 - s1) * tau, br.comm2(prop(s1 * tau, u)))
    v1 = prop(s1 * tau, u)
    v2 = prop(s2 * tau, u)
    if cond == "c2-1a":
        inner = prop((s1 - s2) * tau, P.apply_g(v2))
        return prop((1 - s1) * tau, br.dcomm(v1, inner))
    if cond == "c2-1b":
        inner = prop((s1 - s2) * tau, br.comm(v2))
        return prop((1 - s1) * tau, br.dg(v1, inner))
    raise ValueError(f"unknown condition {cond!r}")


@dataclass
class CommutatorReport:
    """Sampled sup of one regularity condition, per number of modes ``N``.

    ``samples`` rows are ``(N, t, sigma1, sigma2, value)`` with ``sigma2``
    NaN for single-parameter conditions.
    """

    condition_id: str
    N_list: list[int]
    sup_values: list[float]
    sigmas: tuple[float, ...]
    t_values: tuple[float, ...]
    tau: float
    samples: list[tuple] = field(default_factory=list, repr=False)
    metadata: dict = field(default_factory=dict)

    def growth_factors(self) -> list[float]:
        """Growth of the sup per doubling of ``N`` between consecutive entries."""
        out = []
        for (n0, s0), (n1, s1) in zip(zip(self.N_list, self.sup_values),
                                      zip(self.N_list[1:], self.sup_values[1:])):
            doublings = np.log2(n1 / n0)
            out.append(float((s1 / s0) ** (1.0 / doublings)) if s0 > 0 else float("inf"))
        return out

    def growth_rate(self) -> float:
        """Per-doubling growth over the whole range: ``2**slope`` of ``log2 sup`` against ``log2 N``."""
        if len(self.N_list) < 2 or min(self.sup_values) <= 0:
            return float("nan")
        slope = np.polyfit(np.log2(self.N_list), np.log2(self.sup_values), 1)[0]
        return float(2.0 ** slope)

    def write_csv(self, path: str | Path) -> tuple[Path, Path]:
        """Write ``condition_id,N,sup_value`` and a companion ``*-samples.csv``."""
        path = Path(path)
        samples_path = path.with_name(path.stem + "-samples" + path.suffix)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            fh.write("# lawson-lab v1\n")
            w.writerow(["condition_id", "N", "sup_value"])
            for n, s in zip(self.N_list, self.sup_values):
                w.writerow([self.condition_id, n, repr(s)])
        with open(samples_path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            fh.write("# lawson-lab v1\n")
            w.writerow(["condition_id", "N", "t", "sigma1", "sigma2", "value"])
            for n, t, s1, s2, val in self.samples:
                w.writerow([self.condition_id, n, repr(t), repr(s1), repr(s2), repr(val)])
        return path, samples_path


def regularity_sweep(condition_id: str, make_problem: Callable[[int], SchrodingerProblem],
                     initial, N_list: Sequence[int], *, seed: int = 0,
                     sigmas: Sequence[float] = DEFAULT_SIGMAS,
                     t_fractions: Sequence[float] = DEFAULT_T_FRACTIONS,
                     T: float = 1.0, tau: float = 2.0 ** -4,
                     reference_kw: dict | None = None) -> CommutatorReport:
    """Sample ``condition_id`` on the ``sigma x t`` grid for every ``N`` in ``N_list``.

    ``initial`` is either a regularity parameter ``alpha`` (a fresh
    :func:`sample_initial_data` draw per ``N``) or a callable
    ``grid -> state``.  ``u(t)`` comes from :func:`reference_trajectory`.
    Two-parameter conditions use the triangle ``sigma2 <= sigma1``.
    """
    if condition_id not in CONDITIONS:
        raise ValueError(f"unknown condition {condition_id!r}; choose from {CONDITIONS}")
    if not len(N_list) or not len(sigmas) or not len(t_fractions):
        raise ValueError("N_list, sigmas and t_fractions must be non-empty")
    cond = _LINEAR_ALIAS.get(condition_id, condition_id)
    two_param = cond in ("c2-1a", "c2-1b")
    t_values = tuple(f * T for f in t_fractions)
    reference_kw = dict(reference_kw or {})

    sups, samples = [], []
    for N in N_list:
        problem = make_problem(N)
        if condition_id.startswith("linear") and not isinstance(problem, LinearProblem):
            raise TypeError(f"{condition_id} needs a LinearProblem")
        br = _Brackets(problem)
        u0 = (initial(problem.grid) if callable(initial)
              else sample_initial_data(problem.grid, float(initial), seed).values)
        states = _states_at(problem, u0, t_values, T, reference_kw)
        best = 0.0
        for t, u in zip(t_values, states):
            for s1 in sigmas:
                for s2 in (sigmas if two_param else (np.nan,)):
                    if two_param and s2 > s1:
                        continue
                    val = l2_norm(_sample(cond, br, tau, u, s1, s2))
                    samples.append((N, t, s1, s2, val))
                    best = max(best, val)
        sups.append(best)
    return CommutatorReport(condition_id, list(N_list), sups, tuple(sigmas), t_values, tau,
                            samples, metadata={"seed": seed, "T": T})


def _states_at(problem, u0, t_values, T, reference_kw):
    nonzero = sorted({t for t in t_values if t > 0})
    if not nonzero:
        return [u0 for _ in t_values]
    # record on the coarsest uniform grid containing every requested time
    fractions = [t / T for t in nonzero]
    for n in range(1, 1025):
        if all(abs(f * n - round(f * n)) < 1e-9 for f in fractions):
            break
    else:
        raise ValueError("sample times are not commensurate with T")
    kw = {"tau_min": 2.0 ** -6}
    kw.update(reference_kw)
    ref = reference_trajectory(problem, u0, T, record_dt=T / n, **kw)
    return [u0 if t == 0 else ref.at(t) for t in t_values]
