"""Fourier spectral discretisation of Schrodinger equations on ``[-pi, pi]``.

Grid and transform conventions
------------------------------
Grid points are ``x_j = j * 2 pi / N`` for ``j = -N/2+1, ..., N/2`` and state
vectors store the samples in that order (ascending ``j``).  Fourier modes are
indexed ``m = -N/2+1, ..., N/2`` and

    forward:   nu_m = (1/N) sum_j u_j exp(-i m x_j)
    backward:  u_j  = sum_m nu_m exp(i m x_j)

With the ``1/N`` on the forward side, ``2 pi sum_m |nu_m|^2`` equals the
trapezoidal rule ``(2 pi / N) sum_j |u_j|^2``; this is the discrete ``L^2``
norm used everywhere (``sobolev_norm(v, 0)``).

The free operator is ``A_N = i F^{-1} D^2 F``, i.e. ``A = -i d^2/dx^2``,
so ``exp(-t A)`` multiplies mode ``m`` by ``exp(-i t m^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import NonFiniteState, ReferenceNotConverged
from .integrators import lawson_step, phi1
from .rk_tableau import builtin_tableau

EPSILON = 1e-6
DEFAULT_N = 256


class FourierGrid:
    """Equidistant periodic grid with ``N`` points (``N`` even, ``N >= 4``)."""

    def __init__(self, N: int):
        N = int(N)
        if N < 4 or N % 2:
            raise ValueError(f"N must be even and >= 4, got {N}")
        self.N = N
        self.j = np.arange(-N // 2 + 1, N // 2 + 1)
        self.x = self.j * (2 * np.pi / N)
        self.mode_indices = np.arange(-N // 2 + 1, N // 2 + 1)
        # wavenumbers in numpy's native FFT order, with the Nyquist mode as +N/2
        native = np.fft.fftfreq(N, 1.0 / N)
        native[N // 2] = N // 2
        self.native_modes = native
        # maps native order to ascending mode order
        self._order = np.mod(self.mode_indices, N)
        # fft sums over k = j - j0; the shift puts the phase back on x_j
        self._shift = np.exp(-1j * self.native_modes * self.x[0])

    def forward(self, u: np.ndarray) -> np.ndarray:
        """Fourier coefficients ``nu_m`` in ascending mode order."""
        return (np.fft.fft(u) * self._shift / self.N)[self._order]

    def backward(self, nu: np.ndarray) -> np.ndarray:
        native = np.empty(self.N, dtype=complex)
        native[self._order] = nu
        return np.fft.ifft(native / self._shift) * self.N

    def apply_symbol(self, symbol_native: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Apply a Fourier multiplier given in native order.

        The phase shift of the grid cancels for diagonal multipliers, so this
        is one plain FFT pair.
        """
        return np.fft.ifft(symbol_native * np.fft.fft(v))

    def laplacian(self, v):
        return self.apply_symbol(-self.native_modes ** 2, v)

    def gradient(self, v):
        return self.apply_symbol(1j * self.native_modes, v)

    def dft_matrices(self):
        """Dense ``(F, F^{-1})`` with rows/columns in ascending mode/grid order."""
        phase = np.outer(self.mode_indices, self.x)
        F = np.exp(-1j * phase) / self.N
        return F, np.exp(1j * phase).T

    def __eq__(self, other):
        return isinstance(other, FourierGrid) and other.N == self.N

    def __hash__(self):
        return hash(("FourierGrid", self.N))

    def __repr__(self):
        return f"FourierGrid(N={self.N})"


@lru_cache(maxsize=32)
def grid_for(N: int) -> FourierGrid:
    return FourierGrid(N)


def sobolev_norm(v: np.ndarray, mu: float) -> float:
    """Discrete norm ``||v||_{mu,N}^2 = 2 pi ||(I + D^2)^{mu/2} F v||^2``."""
    grid = grid_for(len(v))
    nu = grid.forward(v)
    weight = (1.0 + grid.mode_indices.astype(float) ** 2) ** mu
    return float(np.sqrt(2 * np.pi * np.sum(weight * np.abs(nu) ** 2)))


def l2_norm(v: np.ndarray) -> float:
    """Same as ``sobolev_norm(v, 0)`` but computed on the grid (trapezoidal rule)."""
    return float(np.sqrt(2 * np.pi / len(v) * np.sum(np.abs(v) ** 2)))


class SchrodingerProblem:
    """Common part of the periodic Schrodinger problems: the free flow.

    Multiplier tables for ``exp(-i t m^2)`` and ``phi_1(-i t m^2)`` are cached
    per ``t``; a Lawson method only ever asks for a handful of distinct times.
    """

    _CACHE_LIMIT = 64

    def __init__(self, grid: FourierGrid | int):
        self.grid = grid if isinstance(grid, FourierGrid) else FourierGrid(grid)
        self.dim = self.grid.N
        self._m2 = self.grid.native_modes.astype(float) ** 2
        self._prop_cache: dict[float, np.ndarray] = {}
        self._phi_cache: dict[float, np.ndarray] = {}

    def _cached(self, cache, t, build):
        table = cache.get(t)
        if table is None:
            if len(cache) >= self._CACHE_LIMIT:
                cache.clear()
            table = build(t)
            cache[t] = table
        return table

    def propagator_symbol(self, t: float) -> np.ndarray:
        return self._cached(self._prop_cache, float(t), lambda s: np.exp(-1j * s * self._m2))

    def apply_propagator(self, t: float, v: np.ndarray) -> np.ndarray:
        if t == 0:
            return np.asarray(v, dtype=complex).copy()
        return self.grid.apply_symbol(self.propagator_symbol(t), v)

    def apply_phi1(self, t: float, v: np.ndarray) -> np.ndarray:
        table = self._cached(self._phi_cache, float(t), lambda s: phi1(-1j * s * self._m2))
        return self.grid.apply_symbol(table, v)

    def apply_A(self, v: np.ndarray) -> np.ndarray:
        """``A_N v`` with ``A_N = i F^{-1} D^2 F`` (that is ``-i v_xx``)."""
        return self.grid.apply_symbol(1j * self._m2, v)

    def dense_A(self) -> np.ndarray:
        F, Finv = self.grid.dft_matrices()
        return Finv @ np.diag(1j * self.grid.mode_indices.astype(float) ** 2) @ F


POTENTIALS = {
    "sin": lambda x: np.sin(x),
    "quad": lambda x: (x / np.pi) ** 2,
    "zero": lambda x: np.zeros_like(x),
}


class LinearProblem(SchrodingerProblem):
    """``u_t = i u_xx + i f(x) u``: ``g(u) = B_N u`` with ``B_N = i diag(f(x_j))``.

    ``potential`` is one of ``"sin"``, ``"quad"``, ``"zero"``, a callable of
    ``x``, or a constant.  The quadratic potential is sampled as is, so its
    periodic extension has a kink at ``x = +-pi``.
    """

    def __init__(self, grid: FourierGrid | int, potential="sin"):
        super().__init__(grid)
        if isinstance(potential, str):
            self.potential_name = potential
            f = POTENTIALS[potential](self.grid.x)
        elif callable(potential):
            self.potential_name = getattr(potential, "__name__", "custom")
            f = potential(self.grid.x)
        else:
            self.potential_name = f"const{potential}"
            f = np.full(self.grid.N, float(potential))
        self.f = np.asarray(f, dtype=float)

    def apply_g(self, v: np.ndarray) -> np.ndarray:
        return 1j * self.f * v

    def apply_B(self, v: np.ndarray) -> np.ndarray:
        return 1j * self.f * v

    def apply_dg(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        return 1j * self.f * w

    def dense_B(self) -> np.ndarray:
        return np.diag(1j * self.f)

    def __repr__(self):
        return f"LinearProblem(N={self.grid.N}, potential={self.potential_name!r})"


class NLSProblem(SchrodingerProblem):
    """Cubic Schrodinger equation ``u_t = i u_xx + i beta |u|^2 u``."""

    def __init__(self, grid: FourierGrid | int, beta: float = 1.0):
        super().__init__(grid)
        self.beta = float(beta)

    def apply_g(self, v: np.ndarray) -> np.ndarray:
        return 1j * self.beta * (np.abs(v) ** 2) * v

    def apply_dg(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Frechet derivative ``g'(u) w = i beta (u^2 conj(w) + 2 |u|^2 w)``."""
        return 1j * self.beta * (u * u * np.conj(w) + 2 * np.abs(u) ** 2 * w)

    def __repr__(self):
        return f"NLSProblem(N={self.grid.N}, beta={self.beta})"


@dataclass
class SobolevSample:
    """Random trigonometric polynomial with prescribed Sobolev regularity.

    ``coefficients`` are the unnormalised ``nu_m = r_m / (1+m^2)^((1/2+alpha+eps)/2)``;
    ``values`` holds the grid samples scaled to unit discrete ``L^2`` norm.
    """

    alpha: float
    seed: int
    N: int
    r: np.ndarray = field(repr=False)
    coefficients: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    epsilon: float = EPSILON


def unit_disc(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` points uniform on the closed unit disc, by rejection from the square.

    Candidates are drawn in batches of ``n`` pairs and accepted in draw order,
    so the output depends only on the generator state.
    """
    out = np.empty(n, dtype=complex)
    filled = 0
    while filled < n:
        xy = rng.uniform(-1.0, 1.0, size=(n, 2))
        z = xy[:, 0] + 1j * xy[:, 1]
        z = z[np.abs(z) <= 1.0][: n - filled]
        out[filled:filled + len(z)] = z
        filled += len(z)
    return out


def sample_initial_data(grid: FourierGrid | int, alpha: float, seed: int) -> SobolevSample:
    """Random initial vector whose continuous limit lies in ``H^alpha``.

    Random numbers come from ``numpy.random.Generator(PCG64(seed))``; the
    ``r_m`` are assigned in ascending mode order.
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    grid = grid if isinstance(grid, FourierGrid) else grid_for(grid)
    rng = np.random.Generator(np.random.PCG64(seed))
    r = unit_disc(rng, grid.N)
    m = grid.mode_indices.astype(float)
    nu = r / (1.0 + m ** 2) ** (0.5 * (0.5 + alpha + EPSILON))
    values = grid.backward(nu)
    values = values / l2_norm(values)
    return SobolevSample(alpha=alpha, seed=seed, N=grid.N, r=r, coefficients=nu, values=values)


@dataclass
class ReferenceSolution:
    """Reference states at ``times``; ``accuracy`` estimates the error in ``||.||_{0,N}``."""

    times: np.ndarray
    states: np.ndarray = field(repr=False)
    accuracy: float
    method: str

    def at(self, t: float) -> np.ndarray:
        k = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[k] - t) > 1e-9 * max(1.0, abs(t)):
            raise KeyError(f"no reference state recorded at t={t}")
        return self.states[k]


REFERENCE_TOLERANCE = 1e-8
_RK4 = builtin_tableau("rk4")


def _lawson_rk4_run(problem, u0, T, n_steps, every):
    tau = T / n_steps
    u = np.asarray(u0, dtype=complex)
    out = [u]
    for k in range(1, n_steps + 1):
        u = lawson_step(problem, _RK4, tau, u)
        if k % every == 0:
            out.append(u)
    return np.array(out)


def _eig_run(problem, u0, T, n_records):
    # -A_N + B_N = i H with H Hermitian; diagonalise H once
    H = -1j * (-problem.dense_A() + problem.dense_B())
    H = 0.5 * (H + H.conj().T)
    lam, V = np.linalg.eigh(H)
    coeff = V.conj().T @ np.asarray(u0, dtype=complex)
    times = np.linspace(0.0, T, n_records + 1)
    states = (V @ (np.exp(1j * np.outer(lam, times)) * coeff[:, None])).T
    resid = np.linalg.norm(H @ V - V * lam, 2)
    accuracy = max(resid * T, 1e-15) * l2_norm(u0) + 10 * np.finfo(float).eps * len(lam)
    return times, states, accuracy


def reference_trajectory(problem, u0, T: float, *, record_dt: float | None = None,
                         tau_min: float = 2.0 ** -10, method: str = "auto",
                         refine: int = 64) -> ReferenceSolution:
    """High-accuracy solution recorded at multiples of ``record_dt`` (default ``tau_min``).

    ``method="lawson-rk4"`` runs Lawson-RK4 with ``tau_ref = tau_min / refine``
    and once more with twice that step; the disagreement of the two runs is
    the accuracy estimate and must stay below ``REFERENCE_TOLERANCE``.
    ``method="eig"`` (linear problems only) diagonalises ``-A_N + B_N``
    exactly.  ``"auto"`` picks ``"eig"`` for linear problems.
    """
    record_dt = tau_min if record_dt is None else record_dt
    n_records = round(T / record_dt)
    if n_records < 1 or abs(n_records * record_dt - T) > 1e-12 * max(T, 1.0):
        raise ValueError("T must be an integer multiple of record_dt")
    if method == "auto":
        method = "eig" if isinstance(problem, LinearProblem) else "lawson-rk4"
    if method == "eig":
        times, states, accuracy = _eig_run(problem, u0, T, n_records)
        return ReferenceSolution(times, states, accuracy, "eig")
    if method != "lawson-rk4":
        raise ValueError(f"unknown reference method {method!r}")

    fine_steps_per_record = max(1, int(np.ceil(record_dt / (tau_min / refine))))
    if fine_steps_per_record % 2:
        fine_steps_per_record += 1
    n_fine = fine_steps_per_record * n_records
    try:
        fine = _lawson_rk4_run(problem, u0, T, n_fine, fine_steps_per_record)
        coarse = _lawson_rk4_run(problem, u0, T, n_fine // 2, fine_steps_per_record // 2)
    except NonFiniteState as exc:
        raise ReferenceNotConverged(f"reference run diverged: {exc}") from None
    diffs = [l2_norm(a - b) for a, b in zip(fine, coarse)]
    disagreement = max(diffs)
    if not np.isfinite(disagreement) or disagreement > REFERENCE_TOLERANCE:
        raise ReferenceNotConverged(
            f"step-halving disagreement {disagreement:.3e} exceeds {REFERENCE_TOLERANCE:g}")
    times = np.arange(n_records + 1) * (T / n_records)
    return ReferenceSolution(times, fine, max(disagreement, 1e-15), "lawson-rk4")


def reference_solution(problem, u0, T: float, **kw) -> np.ndarray:
    """Reference value of the exact solution at time ``T``."""
    kw.setdefault("record_dt", T)
    return reference_trajectory(problem, u0, T, **kw).states[-1]


def dense_generator(problem) -> np.ndarray:
    """Dense ``-A_N + B_N`` for a linear problem (test oracle, small ``N`` only)."""
    return -problem.dense_A() + problem.dense_B()
