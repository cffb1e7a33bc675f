import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from lawsonlab import ReferenceNotConverged
from lawsonlab.spectral import (
    FourierGrid, LinearProblem, NLSProblem, dense_generator, grid_for, l2_norm,
    reference_solution, reference_trajectory, sample_initial_data, sobolev_norm, unit_disc,
)


def test_grid_layout():
    g = FourierGrid(8)
    np.testing.assert_array_equal(g.j, [-3, -2, -1, 0, 1, 2, 3, 4])
    assert g.x[-1] == pytest.approx(np.pi)
    assert g.native_modes[4] == 4
    with pytest.raises(ValueError):
        FourierGrid(7)


def test_single_mode_round_trip():
    g = FourierGrid(16)
    for m in (-7, 0, 3, 8):
        v = np.exp(1j * m * g.x)
        nu = g.forward(v)
        expected = np.zeros(16, dtype=complex)
        expected[m + 7] = 1
        np.testing.assert_allclose(nu, expected, atol=1e-14)
        np.testing.assert_allclose(g.backward(nu), v, atol=1e-14)


def test_dft_matrices_match_fft():
    g = FourierGrid(12)
    F, Finv = g.dft_matrices()
    v = np.random.default_rng(1).normal(size=12) + 0j
    np.testing.assert_allclose(F @ v, g.forward(v), atol=1e-13)
    np.testing.assert_allclose(Finv @ F, np.eye(12), atol=1e-13)


def test_spectral_derivatives():
    g = FourierGrid(32)
    v = np.sin(3 * g.x) + 0j
    np.testing.assert_allclose(g.laplacian(v), -9 * v, atol=1e-12)
    np.testing.assert_allclose(g.gradient(v), 3 * np.cos(3 * g.x), atol=1e-12)


def test_propagator_on_modes():
    p = LinearProblem(16, "zero")
    for m in (0, 1, -3, 8):
        v = np.exp(1j * m * p.grid.x)
        np.testing.assert_allclose(p.apply_propagator(0.7, v), np.exp(-0.7j * m * m) * v,
                                   atol=1e-13)
    v = np.arange(16) + 0j
    out = p.apply_propagator(0, v)
    assert out is not v and np.array_equal(out, v)


@settings(max_examples=25)
@given(st.integers(0, 2 ** 31), st.floats(-3, 3), st.floats(-3, 3))
def test_propagator_unitary_and_group(seed, s, t):
    p = LinearProblem(32, "zero")
    rng = np.random.default_rng(seed)
    v = rng.normal(size=32) + 1j * rng.normal(size=32)
    assert l2_norm(p.apply_propagator(t, v)) == pytest.approx(l2_norm(v), rel=1e-12)
    np.testing.assert_allclose(p.apply_propagator(s, p.apply_propagator(t, v)),
                               p.apply_propagator(s + t, v), atol=1e-11)


def test_phi1_on_modes():
    p = LinearProblem(16, "zero")
    v = np.exp(2j * p.grid.x)
    expected = (np.exp(-4j * 0.5) - 1) / (-4j * 0.5)
    np.testing.assert_allclose(p.apply_phi1(0.5, v), expected * v, atol=1e-14)
    np.testing.assert_allclose(p.apply_phi1(0.5, np.ones(16)), np.ones(16), atol=1e-14)


def test_nonlinearities():
    lin = LinearProblem(8, "sin")
    v = np.full(8, 2.0 + 0j)
    np.testing.assert_allclose(lin.apply_g(v), 2j * np.sin(lin.grid.x))
    quad = LinearProblem(8, "quad")
    assert quad.f[-1] == pytest.approx(1.0)
    nls = NLSProblem(8, beta=-2)
    np.testing.assert_allclose(nls.apply_g(np.full(8, 1 + 1j)), -2j * 2 * (1 + 1j) * np.ones(8))


def test_sobolev_norm_examples():
    g = grid_for(16)
    assert sobolev_norm(np.ones(16), 0) == pytest.approx(np.sqrt(2 * np.pi))
    v = np.exp(3j * g.x)
    assert sobolev_norm(v, 1) == pytest.approx(np.sqrt(2 * np.pi * 10))
    assert sobolev_norm(v, 2) == pytest.approx(np.sqrt(2 * np.pi) * 10)


@settings(max_examples=25)
@given(st.integers(0, 2 ** 31))
def test_parseval_and_monotone_in_mu(seed):
    g = grid_for(64)
    rng = np.random.default_rng(seed)
    v = rng.normal(size=64) + 1j * rng.normal(size=64)
    trap = np.sqrt(2 * np.pi / 64 * np.sum(np.abs(v) ** 2))
    assert sobolev_norm(v, 0) == pytest.approx(trap, rel=1e-12)
    norms = [sobolev_norm(v, mu) for mu in (0, 0.5, 1, 2, 3)]
    assert all(a <= b for a, b in zip(norms, norms[1:]))


def test_unit_disc_sampler():
    z = unit_disc(np.random.Generator(np.random.PCG64(5)), 4000)
    assert np.all(np.abs(z) <= 1)
    # uniform on the disc: E|z|^2 = 1/2
    assert np.mean(np.abs(z) ** 2) == pytest.approx(0.5, abs=0.02)


def test_initial_data_deterministic_and_normalised():
    a = sample_initial_data(64, 1.5, 11)
    b = sample_initial_data(64, 1.5, 11)
    assert np.array_equal(a.values, b.values)
    assert l2_norm(a.values) == pytest.approx(1.0, rel=1e-14)
    assert not np.array_equal(a.values, sample_initial_data(64, 1.5, 12).values)
    m = grid_for(64).mode_indices
    np.testing.assert_allclose(a.coefficients,
                               a.r / (1 + m ** 2.0) ** ((0.5 + 1.5 + 1e-6) / 2))


def test_initial_data_regularity():
    Ns = [128, 256, 512, 1024]
    low = [sobolev_norm(sample_initial_data(N, 2.0, 0).values, 1) for N in Ns]
    high = [sobolev_norm(sample_initial_data(N, 2.0, 0).values, 3) for N in Ns]
    assert max(low) / min(low) < 2
    assert all(b / a >= 1.5 for a, b in zip(high, high[1:]))


@pytest.mark.parametrize("potential", ["sin", "quad"])
@pytest.mark.parametrize("method", ["eig", "lawson-rk4"])
def test_linear_reference_matches_dense_expm(potential, method):
    prob = LinearProblem(32, potential)
    u0 = sample_initial_data(prob.grid, 1.0, 0).values
    ref = reference_trajectory(prob, u0, 1.0, record_dt=0.25, tau_min=2 ** -6, method=method)
    M = dense_generator(prob)
    for t, state in zip(ref.times, ref.states):
        assert l2_norm(state - expm(t * M) @ u0) < 1e-9
    assert ref.accuracy < 1e-9


def test_reference_free_flow_and_zero_beta():
    u0 = sample_initial_data(32, 0.0, 2).values
    free = LinearProblem(32, "zero")
    nls0 = NLSProblem(32, beta=0.0)
    for prob in (free, nls0):
        out = reference_solution(prob, u0, 0.5, tau_min=2 ** -4)
        assert l2_norm(out - free.apply_propagator(0.5, u0)) < 1e-12


def test_nls_reference_conserves_mass():
    prob = NLSProblem(64, 1.0)
    u0 = sample_initial_data(prob.grid, 3.0, 0).values
    ref = reference_trajectory(prob, u0, 0.5, record_dt=0.125, tau_min=2 ** -6)
    assert ref.method == "lawson-rk4"
    for state in ref.states:
        assert l2_norm(state) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(KeyError):
        ref.at(0.1)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_reference_diverging():
    prob = NLSProblem(64, 200.0)
    u0 = 3 * sample_initial_data(prob.grid, 0.0, 0).values
    with pytest.raises(ReferenceNotConverged):
        reference_trajectory(prob, u0, 0.25, tau_min=2 ** -2, refine=1)


def test_reference_not_converged():
    prob = NLSProblem(64, 20.0)
    u0 = sample_initial_data(prob.grid, 0.0, 0).values
    with pytest.raises(ReferenceNotConverged, match="disagreement"):
        reference_trajectory(prob, u0, 0.25, tau_min=2 ** -2, refine=1)
