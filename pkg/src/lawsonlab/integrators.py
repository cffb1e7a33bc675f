"""Lawson and exponential Euler time steppers for ``u' + A u = g(u)``.

Steppers only talk to a *problem* object that provides

``dim``
    state dimension,
``apply_propagator(t, v)``
    the free flow ``exp(-t A) v``,
``apply_g(v)``
    the nonlinearity,
``apply_phi1(t, v)`` (optional)
    ``phi_1(-t A) v``, needed by the exponential Euler method only.

Nothing else about ``A`` is assumed, so the same code drives the Fourier
spectral problems in :mod:`lawsonlab.spectral` and small test problems.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Protocol, runtime_checkable

import numpy as np

from .errors import CapabilityMissing, NonFiniteState
from .rk_tableau import RKTableau, builtin_tableau

PHI1_SERIES_RADIUS = 1e-2
PHI1_SERIES_TERMS = 10
_PHI1_TAYLOR = np.array([1.0 / factorial(k + 1) for k in range(PHI1_SERIES_TERMS)])


@runtime_checkable
class ProblemInterface(Protocol):
    dim: int

    def apply_propagator(self, t: float, v: np.ndarray) -> np.ndarray: ...

    def apply_g(self, v: np.ndarray) -> np.ndarray: ...


def phi1_scalar(z: complex) -> complex:
    """``phi_1(z) = (exp(z) - 1) / z`` with the removable singularity filled in."""
    z = complex(z)
    if abs(z) < PHI1_SERIES_RADIUS:
        return complex(np.polynomial.polynomial.polyval(z, _PHI1_TAYLOR))
    return complex(np.expm1(z) / z)


def phi1(z: np.ndarray) -> np.ndarray:
    """Vectorised :func:`phi1_scalar`."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    small = np.abs(z) < PHI1_SERIES_RADIUS
    out[small] = np.polynomial.polynomial.polyval(z[small], _PHI1_TAYLOR)
    big = ~small
    out[big] = np.expm1(z[big]) / z[big]
    return out


def _check_finite(v, what):
    if not np.all(np.isfinite(v)):
        raise NonFiniteState(f"non-finite values in {what}")
    return v


class _Flow:
    """Propagator applications of one step, grouped by exact exponent.

    Terms sharing the same rational multiple of ``tau`` are summed before
    the propagator is applied once; zero exponents skip it entirely.
    """

    def __init__(self, problem, tau):
        self.problem = problem
        self.tau = tau

    def combine(self, terms: dict[Fraction, np.ndarray]) -> np.ndarray:
        out = None
        for theta in sorted(terms):
            v = terms[theta]
            if theta != 0:
                v = self.problem.apply_propagator(float(theta) * self.tau, v)
            out = v if out is None else out + v
        return out


def _accumulate(terms, theta, v):
    if theta in terms:
        terms[theta] = terms[theta] + v
    else:
        terms[theta] = v


def lawson_step(problem, tab: RKTableau, tau: float, u: np.ndarray) -> np.ndarray:
    """One step of the Lawson method generated by ``tab``.

    Stages ``U_i = e^{-c_i tau A} u + tau sum_{j<i} a_ij e^{-(c_i - c_j) tau A} g(U_j)``
    and ``u_next = e^{-tau A} u + tau sum_i b_i e^{-(1 - c_i) tau A} g(U_i)``.
    """
    if not tau > 0:
        raise ValueError(f"step size must be positive, got {tau}")
    _check_finite(u, "input state")
    flow = _Flow(problem, tau)
    s = tab.s
    G = []
    for i in range(s):
        terms = {tab.c[i]: u}
        for j in range(i):
            if tab.a[i][j] != 0:
                _accumulate(terms, tab.c[i] - tab.c[j], (tau * float(tab.a[i][j])) * G[j])
        U = flow.combine(terms)
        G.append(_check_finite(problem.apply_g(U), f"stage {i + 1}"))
    terms = {Fraction(1): u}
    for i in range(s):
        if tab.b[i] != 0:
            _accumulate(terms, 1 - tab.c[i], (tau * float(tab.b[i])) * G[i])
    return _check_finite(flow.combine(terms), "new state")


def exponential_euler_step(problem, tau: float, u: np.ndarray) -> np.ndarray:
    """``u_next = e^{-tau A} u + tau phi_1(-tau A) g(u)``."""
    if not tau > 0:
        raise ValueError(f"step size must be positive, got {tau}")
    phi = getattr(problem, "apply_phi1", None)
    if phi is None:
        raise CapabilityMissing(f"{type(problem).__name__} does not provide apply_phi1")
    _check_finite(u, "input state")
    gu = _check_finite(problem.apply_g(u), "g(u)")
    out = problem.apply_propagator(tau, u) + tau * phi(tau, gu)
    return _check_finite(out, "new state")


def rk_step(f, tab: RKTableau, tau: float, u: np.ndarray) -> np.ndarray:
    """Plain explicit RK step for ``u' = f(u)`` (the Lawson method with ``A = 0``)."""
    a, b = tab.a_float(), tab.b_float()
    k = []
    for i in range(tab.s):
        stage = u.copy()
        for j in range(i):
            if a[i, j] != 0:
                stage = stage + tau * a[i, j] * k[j]
        k.append(f(stage))
    out = u.copy()
    for i in range(tab.s):
        if b[i] != 0:
            out = out + tau * b[i] * k[i]
    return out


METHODS = ("lawson", "exponential-euler")


@dataclass(frozen=True)
class StepperConfig:
    """What to integrate with and for how long.

    The step size is always derived as ``T / n_steps`` so that the final
    time is hit exactly.
    """

    method: str
    T: float
    n_steps: int
    tableau: RKTableau | None = None
    record_every: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.method == "lawson" and self.tableau is None:
            raise ValueError("the Lawson method needs a tableau")
        if not self.T > 0:
            raise ValueError("final time must be positive")
        if self.n_steps < 1 or self.record_every < 1:
            raise ValueError("n_steps and record_every must be >= 1")

    @classmethod
    def from_tau(cls, method, T, tau, **kw):
        n = round(T / tau)
        if n < 1 or abs(n * tau - T) > 1e-12 * max(T, 1.0):
            raise ValueError(f"T={T} is not an integer multiple of tau={tau}")
        return cls(method=method, T=T, n_steps=n, **kw)

    @property
    def tau(self) -> float:
        return self.T / self.n_steps

    def stepper(self):
        if self.method == "lawson":
            tab = self.tableau
            return lambda problem, tau, u: lawson_step(problem, tab, tau, u)
        return exponential_euler_step


def method_config(name: str, T: float, n_steps: int, record_every: int = 1) -> StepperConfig:
    """Build a config from a method label like ``lawson-rk4``, ``lawson-euler`` or ``exp-euler``."""
    if name in ("exp-euler", "exponential-euler"):
        return StepperConfig("exponential-euler", T, n_steps, record_every=record_every)
    if name.startswith("lawson-"):
        tab_name = name[len("lawson-"):]
        if tab_name == "euler":
            tab_name = "explicit-euler"
        return StepperConfig("lawson", T, n_steps, tableau=builtin_tableau(tab_name),
                             record_every=record_every)
    raise ValueError(f"unknown method label {name!r}")


@dataclass
class Trajectory:
    times: np.ndarray
    states: list = field(repr=False)
    final: np.ndarray = field(repr=False)


def integrate(problem, config: StepperConfig, u0: np.ndarray) -> Trajectory:
    """Take ``config.n_steps`` steps from ``u0``; record the initial state, every
    ``record_every``-th state and the final one."""
    step = config.stepper()
    tau = config.tau
    n = config.n_steps
    u = np.asarray(u0, dtype=complex)
    times, states = [0.0], [u]
    for k in range(1, n + 1):
        u = step(problem, tau, u)
        if k % config.record_every == 0 or k == n:
            times.append(config.T * k / n)
            states.append(u)
    return Trajectory(times=np.array(times), states=states, final=u)
