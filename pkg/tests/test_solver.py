import dataclasses
import math

import numpy as np
import pytest

from fairgeom import prob_core as pc
from fairgeom.errors import EpsilonOutOfRange, InvalidReconstruction, NonpositiveRate
from fairgeom.geometry import PerturbationSet, compute_w_matrices, singular_triples
from fairgeom.random_instances import random_prior
from fairgeom.solver import (
    compute_k,
    design_bound,
    evaluate_quadratic_objective,
    markov_consistency_check,
    select_direction,
    solve,
)

REPORTED_L1 = np.array([-0.8314, 0.5557])


def same_up_to_sign(a, b, tol):
    return min(np.abs(a - b).max(), np.abs(a + b).max()) < tol


def test_select_direction_example(w):
    d, second = select_direction(w)
    assert not second
    assert same_up_to_sign(d, REPORTED_L1, 1e-3)
    assert abs(d @ w.sqrt_p_s) < 1e-12


def test_select_direction_identity():
    prior = pc.validate_prior(np.eye(2), np.eye(2), [0.5, 0.5])
    w = compute_w_matrices(prior)
    d, second = select_direction(w)
    assert second
    assert np.linalg.norm(d) == pytest.approx(1.0)
    assert abs(d @ w.sqrt_p_s) < 1e-12


def test_select_direction_identity_3x3_non_uniform():
    prior = pc.validate_prior(np.eye(3), np.eye(3), [0.2, 0.3, 0.5])
    w = compute_w_matrices(prior)
    d, second = select_direction(w)
    assert second
    assert abs(d @ w.sqrt_p_s) < 1e-12


def test_select_direction_random_3x3(rng):
    for _ in range(20):
        w = compute_w_matrices(random_prior(rng, 3))
        d, second = select_direction(w)
        wtw = w.w_ty.T @ w.w_ty
        sigma = np.linalg.norm(w.w_ty @ d)
        # d is a right singular vector: W^T W d = sigma^2 d
        np.testing.assert_allclose(wtw @ d, sigma**2 * d, atol=1e-9 * max(1.0, sigma**2))
        expected = singular_triples(w.w_ty)[1 if second else 0].sigma
        assert sigma == pytest.approx(expected, abs=1e-9)
        assert abs(d @ w.sqrt_p_s) < 1e-8


def test_compute_k(w):
    d, _ = select_direction(w)
    assert compute_k(0.005, 0.2, w.w_xy, d) == 1.0
    assert compute_k(0.05, 0.2, w.w_xy, d) == pytest.approx(0.05 * 23.7087 / math.sqrt(0.4), rel=1e-5)
    assert compute_k(0.05, 0.2, w.w_xy, d) == pytest.approx(1.874, abs=1e-3)
    assert compute_k(10.0, math.inf, w.w_xy, d) == 1.0
    assert compute_k(0.05, 1e9, w.w_xy, d) == 1.0
    with pytest.raises(NonpositiveRate):
        compute_k(0.01, 0.0, w.w_xy, d)


def test_k_is_smallest_satisfying(w):
    d, _ = select_direction(w)
    for eps in np.linspace(0.001, 0.1, 37):
        k = compute_k(eps, 0.2, w.w_xy, d)
        lhs = 0.5 * eps**2 * np.linalg.norm(w.w_xy @ d) ** 2
        assert lhs <= 0.2 * k**2 * (1 + 1e-12)
        if k > 1:
            assert lhs > 0.2 * (k * (1 - 1e-9)) ** 2


def test_solve_example_p2(prior):
    d = solve(prior, 0.005, 0.2)
    assert d.k_constant == 1.0
    assert d.p2_value == pytest.approx(0.5 * 0.005**2 * 3.2034**2, rel=1e-4)
    assert d.p2_value == pytest.approx(1.2827e-4, abs=1e-8)
    assert d.exact_for_binary_s and not d.used_second_singular and d.within_validity


def test_solve_example_conditionals(prior):
    d = solve(prior, 0.01, 0.2)
    target = np.array([0.3088, 0.6913]) + 0.01 * np.array([0.5557 * -0.8314, 0.8314 * 0.5557])
    cols = [d.p_s_given_y[:, y] for y in range(2)]
    assert min(np.abs(c - target).max() for c in cols) < 1e-4
    np.testing.assert_allclose(d.p_s_given_y.sum(axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(d.p_t_given_y.sum(axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(d.p_x_given_y.sum(axis=0), 1.0, atol=1e-12)


def test_solve_invariants(prior, w):
    d = solve(prior, 0.008, 0.2)
    assert np.linalg.norm(d.direction) == pytest.approx(1.0, abs=1e-9)
    assert abs(d.direction @ w.sqrt_p_s) < 1e-9
    pert = d.perturbation()
    obj, feasible = evaluate_quadratic_objective(w, pert, 0.2)
    assert feasible and obj == pytest.approx(d.p2_value, rel=1e-12)
    rate = 0.5 * d.epsilon**2 * np.linalg.norm(w.w_xy @ d.l_vectors[0]) ** 2
    assert rate <= 0.2 + 1e-12
    assert d.mechanism_stochastic
    assert abs(d.exact.i_ys_given_t) < 1e-12
    assert d.exact.max_chi2 == pytest.approx(d.epsilon**2, rel=1e-9)


def test_solve_small_epsilon_limit(prior):
    d = solve(prior, 1e-10, 0.2)
    assert d.p2_value < 1e-18
    for y in range(2):
        np.testing.assert_allclose(d.p_x_given_y[:, y], prior.p_x, atol=1e-8)
    np.testing.assert_allclose(d.mechanism, 0.5, atol=1e-8)


def test_solve_rejects_unrealizable(prior):
    with pytest.raises(InvalidReconstruction):
        solve(prior, 0.03, 0.2)


def test_solve_warns_outside_validity(prior):
    with pytest.warns(EpsilonOutOfRange):
        solve(prior, 0.015, 0.2)


def test_design_bound_beyond_breakpoint(prior, w):
    d, _ = select_direction(w)
    eps_star = math.sqrt(0.4) / np.linalg.norm(w.w_xy @ d)
    assert eps_star == pytest.approx(0.0267, abs=1e-4)
    below = design_bound(prior, 0.99 * eps_star, 0.2)
    above = design_bound(prior, 1.5 * eps_star, 0.2)
    assert below.k_constant == 1.0
    assert above.k_constant == pytest.approx(1.5)
    # once K > 1 the bound saturates at the rate budget
    assert above.p2_value == pytest.approx(0.2 * (3.20336 / 23.70871) ** 2, rel=1e-5)


def test_evaluate_objective_trivial_cases(w):
    obj, feasible = evaluate_quadratic_objective(w, PerturbationSet([0.5, 0.5], np.zeros((2, 2)), 0.01), 0.2)
    assert obj == 0.0 and feasible
    _, feasible = evaluate_quadratic_objective(w, PerturbationSet([1.0], [w.sqrt_p_s], 0.01), 0.2)
    assert not feasible


def test_evaluate_objective_rate_infeasible(w):
    d, _ = select_direction(w)
    _, feasible = evaluate_quadratic_objective(w, PerturbationSet([0.5, 0.5], [d, -d], 0.05), 0.2)
    assert not feasible


def test_markov_consistency_example(prior):
    report = markov_consistency_check(prior, solve(prior, 0.01, 0.2))
    assert report.passed
    assert report.residuals.max() < 1e-9


def test_markov_consistency_identity():
    prior = pc.validate_prior(np.eye(2), np.eye(2), [0.4, 0.6])
    report = markov_consistency_check(prior, solve(prior, 0.05, 0.2))
    assert report.residuals.max() < 1e-15


def test_markov_consistency_negative_control(prior):
    d = solve(prior, 0.01, 0.2)
    bad = d.p_x_given_y.copy()
    bad[0, 0] += 0.01
    bad[:, 0] /= bad[:, 0].sum()
    report = markov_consistency_check(prior, dataclasses.replace(d, p_x_given_y=bad))
    assert not report.passed
    # P_{S|X} contracts the corruption by |0.275 - 0.32|, so roughly 4e-4 remains
    assert report.residuals.max() > 1e-4


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lower_bound_validity_random_priors(rng, n):
    for _ in range(15):
        prior = random_prior(rng, n)
        w = compute_w_matrices(prior)
        eps = 0.9 * w.bounds.valid_epsilon_sup
        d = solve(prior, eps, 0.1)
        obj, feasible = evaluate_quadratic_objective(w, d.perturbation(), 0.1)
        assert feasible
        assert obj == d.p2_value
        assert d.p2_value == pytest.approx(0.5 * eps**2 * (d.sigma / d.k_constant) ** 2, rel=1e-12)
        assert abs(d.exact.i_ys_given_t) < 1e-12
        assert d.exact.max_chi2 <= eps**2 + 1e-10
        if d.k_constant == 1.0:
            assert d.exact.max_chi2 == pytest.approx(eps**2, rel=1e-8)
        assert markov_consistency_check(prior, d).passed


def test_monotonicity(prior):
    rates = np.linspace(0.001, 0.5, 40)
    p2_r = [design_bound(prior, 0.03, r).p2_value for r in rates]
    assert all(b >= a * (1 - 1e-12) for a, b in zip(p2_r, p2_r[1:]))
    eps = np.linspace(0.001, 0.1, 60)
    p2_e = [design_bound(prior, e, 0.2).p2_value for e in eps]
    assert all(b >= a * (1 - 1e-12) for a, b in zip(p2_e, p2_e[1:]))
