import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lawsonlab.diagnostics import (
    CONDITIONS, commutator_derivative_definition, commutator_derivative_nls,
    double_commutator_nls, frechet_g, lie_commutator_definition, lie_commutator_nls,
    linear_commutator, regularity_sweep, second_derivative_g,
)
from lawsonlab.spectral import LinearProblem, NLSProblem, grid_for, l2_norm, sample_initial_data, sobolev_norm


def _rand(N, seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=N) + 1j * rng.normal(size=N)


def _smooth(N, seed, alpha=6.0):
    return sample_initial_data(N, alpha, seed).values


def test_constant_and_plane_wave_commute():
    g = grid_for(32)
    for u in (np.full(32, 0.7 - 0.2j), 1.3 * np.exp(5j * g.x)):
        for beta in (1.0, -2.5):
            assert l2_norm(lie_commutator_nls(u, beta)) < 1e-11
            assert l2_norm(lie_commutator_definition(u, beta)) < 1e-11


def test_frechet_examples():
    u = np.array([1.0, 1j, 2.0])
    w = np.array([1.0, 1.0, 1j])
    expected = 1j * np.array([3.0, -1 + 2, 4 * (-1j) + 8j])
    np.testing.assert_allclose(frechet_g(u, w, 1.0), expected)
    np.testing.assert_allclose(NLSProblem(4, 2.0).apply_dg(u[:3], w), 2 * expected)


@pytest.mark.parametrize("seed", range(3))
def test_frechet_finite_difference_order(seed):
    u, w = _rand(16, seed), _rand(16, seed + 100)

    def g(v):
        return 1j * np.abs(v) ** 2 * v

    hs = [2.0 ** -k for k in range(4, 9)]
    errs = [np.linalg.norm(g(u + h * w) - g(u) - h * frechet_g(u, w, 1.0)) for h in hs]
    assert np.polyfit(np.log(hs), np.log(errs), 1)[0] >= 1.9
    # second derivative by central differences of g'
    h = 1e-5
    v = _rand(16, seed + 200)
    fd = (frechet_g(u + h * v, w, 1.0) - frechet_g(u - h * v, w, 1.0)) / (2 * h)
    np.testing.assert_allclose(second_derivative_g(u, v, w, 1.0), fd, atol=1e-8)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("beta", [1.0, -0.5, 3.0])
def test_closed_form_matches_definition(seed, beta):
    u = _smooth(256, seed)
    a, b = lie_commutator_nls(u, beta), lie_commutator_definition(u, beta)
    assert l2_norm(a - b) <= 1e-10 * l2_norm(b)


@pytest.mark.parametrize("seed", range(3))
def test_commutator_derivative(seed):
    u, w = _smooth(128, seed), _smooth(128, seed + 50)
    a = commutator_derivative_nls(u, w, 1.5)
    b = commutator_derivative_definition(u, w, 1.5)
    assert l2_norm(a - b) <= 1e-8 * l2_norm(b)
    h = 1e-5
    fd = (lie_commutator_nls(u + h * w, 1.5) - lie_commutator_nls(u - h * w, 1.5)) / (2 * h)
    assert l2_norm(a - fd) <= 1e-6 * l2_norm(a)


def test_double_commutator_by_dense_matrices():
    # for g(u) = B u, [F_A, [F_A, g]] u = [A, [A, B]] u
    prob = LinearProblem(32, "sin")
    A, B = prob.dense_A(), prob.dense_B()
    u = _rand(32, 4)
    C1 = A @ B - B @ A
    np.testing.assert_allclose(linear_commutator(u, prob, 1), C1 @ u, atol=1e-9)
    np.testing.assert_allclose(linear_commutator(u, prob, 2), (A @ C1 - C1 @ A) @ u, atol=1e-7)
    with pytest.raises(ValueError):
        linear_commutator(u, prob, 3)


def test_nls_double_commutator_against_definition():
    # A C(u) - C'(u) A u with C and C' computed from their definitions
    u = _smooth(128, 7, alpha=6.0)
    g = grid_for(128)

    def A(v):
        return g.apply_symbol(1j * g.native_modes ** 2.0, v)

    C = lie_commutator_definition
    dC = commutator_derivative_definition
    expected = A(C(u, 1.0)) - dC(u, A(u), 1.0)
    got = double_commutator_nls(u, 1.0)
    # fourth-order symbols amplify roundoff by about max(m)^4 * eps
    assert l2_norm(got - expected) <= 1e-6 * l2_norm(expected)


@settings(max_examples=20)
@given(st.integers(0, 2 ** 31), st.floats(-2, 2), st.floats(-2, 2))
def test_linear_commutator_is_linear(seed, a, b):
    prob = LinearProblem(32, "quad")
    u, v = _rand(32, seed), _rand(32, seed + 1)
    lhs = linear_commutator(a * u + b * v, prob)
    rhs = a * linear_commutator(u, prob) + b * linear_commutator(v, prob)
    np.testing.assert_allclose(lhs, rhs, atol=1e-8)


def test_constant_potential_commutes():
    u = _rand(64, 0)
    assert np.all(linear_commutator(u, LinearProblem(64, "zero")) == 0)
    assert l2_norm(linear_commutator(u, LinearProblem(64, 2.5))) < 1e-9


@pytest.mark.parametrize("alpha", [2.0, 3.0, 4.0])
@pytest.mark.parametrize("N", [128, 256])
def test_commutator_bounded_by_h2_cubed(alpha, N):
    u = sample_initial_data(N, alpha, 0).values
    ratio = l2_norm(lie_commutator_nls(u, 1.0)) / sobolev_norm(u, 2) ** 3
    assert ratio <= 50


@pytest.mark.parametrize("condition", CONDITIONS)
def test_sweep_runs_every_condition(condition, tmp_path):
    if condition.startswith("linear"):
        make = lambda N: LinearProblem(N, "sin")  # noqa: E731
    else:
        make = lambda N: NLSProblem(N, 1.0)  # noqa: E731
    rep = regularity_sweep(condition, make, 4.0, [32, 64], sigmas=(0.0, 1.0),
                           t_fractions=(0.0, 1.0), T=0.25, tau=0.125)
    assert rep.condition_id == condition and len(rep.sup_values) == 2
    assert all(np.isfinite(s) and s > 0 for s in rep.sup_values)
    pairs = 3 if condition in ("c2-1a", "c2-1b", "linear-o2b", "linear-o2c") else 2
    assert len(rep.samples) == 2 * 2 * pairs
    main, samples = rep.write_csv(tmp_path / "sweep.csv")
    lines = main.read_text().splitlines()
    assert lines[:2] == ["# lawson-lab v1", "condition_id,N,sup_value"]
    assert len(samples.read_text().splitlines()) == 2 + len(rep.samples)


def test_sweep_zero_for_commuting_problem():
    rep = regularity_sweep("linear-o1", lambda N: LinearProblem(N, "zero"), 1.0, [32, 64],
                           T=0.5)
    assert rep.sup_values == [0.0, 0.0]


def test_sweep_rejects_bad_input():
    with pytest.raises(ValueError):
        regularity_sweep("c9", lambda N: NLSProblem(N), 1.0, [32])
    with pytest.raises(TypeError):
        regularity_sweep("linear-o1", lambda N: NLSProblem(N), 1.0, [32], T=0.25)


def test_growth_factors():
    rep = regularity_sweep("linear-o1", lambda N: LinearProblem(N, "sin"),
                           lambda g: np.exp(1j * g.x), [32, 64, 128], T=0.25)
    # a single smooth mode: bounded commutator, growth about one
    assert all(abs(f - 1) < 0.05 for f in rep.growth_factors())
