import math

import numpy as np
import pytest

from fairgeom import prob_core as pc
from fairgeom.errors import (
    AbsoluteContinuityViolation,
    DimensionMismatch,
    NotStochastic,
    SingularChannel,
    ZeroMassMarginal,
    ZeroMassOutput,
    ZeroMassReference,
)

from .conftest import loop_mi

MECH = [[0.9, 0.2], [0.1, 0.8]]


def test_validate_prior_example_marginals(prior):
    np.testing.assert_allclose(prior.p_t, [0.3625, 0.6375], atol=1e-4)
    np.testing.assert_allclose(prior.p_s, [0.3088, 0.6913], atol=1e-4)


def test_validate_prior_identity():
    p = pc.validate_prior(np.eye(2), np.eye(2), [0.5, 0.5])
    np.testing.assert_allclose(p.p_t, [0.5, 0.5])
    np.testing.assert_allclose(p.p_s, [0.5, 0.5])


def test_validate_prior_rejects_rank_one():
    with pytest.raises(SingularChannel):
        pc.validate_prior([[0.5, 0.5], [0.5, 0.5]], [[0.25, 0.4], [0.75, 0.6]], [0.25, 0.75])


@pytest.mark.parametrize(
    "args, exc",
    [
        (([[0.5, 0.2], [0.4, 0.8]], np.eye(2), [0.5, 0.5]), NotStochastic),
        ((np.eye(3), np.eye(2), [0.5, 0.5]), DimensionMismatch),
        ((np.eye(2), np.eye(2), [1.0, 0.0]), ZeroMassMarginal),
        ((np.eye(2), np.eye(2), [0.6, 0.6]), NotStochastic),
    ],
)
def test_validate_prior_errors(args, exc):
    with pytest.raises(exc):
        pc.validate_prior(*args)


def test_build_joint_identity_mechanism(prior):
    joint = pc.build_joint(prior, np.eye(2))
    np.testing.assert_allclose(joint.marginal("Y"), [0.25, 0.75], atol=1e-15)


def test_build_joint_constant_mechanism_is_independent(prior):
    joint = pc.build_joint(prior, [[1.0, 1.0]])
    p_stx_y = joint.p.reshape(-1, 1)
    np.testing.assert_allclose(p_stx_y, np.outer(p_stx_y.sum(axis=1), [1.0]))
    assert pc.mutual_information(joint, "X", "Y") == 0.0


def test_build_joint_normalized_and_reproduces_prior(prior):
    joint = pc.build_joint(prior, MECH)
    assert abs(joint.p.sum() - 1.0) < 1e-15
    np.testing.assert_allclose(joint.p.sum(axis=3), prior.joint_stx(), atol=1e-16)
    np.testing.assert_allclose(joint.marginal("T"), prior.p_t, atol=1e-15)
    np.testing.assert_allclose(joint.marginal("S"), prior.p_s, atol=1e-15)


def test_build_joint_dimension_mismatch(prior):
    with pytest.raises(DimensionMismatch):
        pc.build_joint(prior, np.eye(3))


def test_marginal_axis_order(prior):
    joint = pc.build_joint(prior, MECH)
    np.testing.assert_allclose(joint.marginal("Y", "T"), joint.marginal("T", "Y").T)


def test_mi_independent_is_zero(prior):
    assert pc.mutual_information(pc.build_joint(prior, [[0.3, 0.3], [0.7, 0.7]]), "X", "Y") == pytest.approx(0, abs=1e-15)


def test_mi_copy_uniform_is_ln2():
    p = pc.validate_prior(np.eye(2), np.eye(2), [0.5, 0.5])
    assert pc.mutual_information(pc.build_joint(p, np.eye(2)), "X", "Y") == pytest.approx(math.log(2), abs=1e-15)


def test_mi_ty_with_identity_mechanism_matches_double_sum(prior):
    joint = pc.build_joint(prior, np.eye(2))
    # oracle: P(t, x) written out entry by entry
    p_tx = [[prior.p_t_given_x[t][x] * prior.p_x[x] for x in range(2)] for t in range(2)]
    assert pc.mutual_information(joint, "T", "Y") == pytest.approx(loop_mi(p_tx), abs=1e-15)


def test_cmi_zero_for_markov_joint(prior):
    assert abs(pc.conditional_mutual_information(pc.build_joint(prior, MECH))) < 1e-12


def test_cmi_triple_sum_oracle(prior):
    joint = pc.build_joint(prior, MECH)
    p = joint.p.sum(axis=2)  # (s, t, y)
    total = 0.0
    for s in range(2):
        for t in range(2):
            for y in range(2):
                p_t = p[:, t, :].sum()
                p_st = p[s, t, :].sum()
                p_ty = p[:, t, y].sum()
                total += p[s, t, y] * math.log(p[s, t, y] * p_t / (p_st * p_ty))
    assert abs(total) < 1e-12
    assert pc.conditional_mutual_information(joint) == pytest.approx(total, abs=1e-15)


def test_cmi_copy_case_equals_conditional_entropy():
    # Y = S exactly, so I(Y;S|T) = H(S|T)
    p_sty = np.zeros((2, 2, 1, 2))
    p_st = np.array([[0.3, 0.1], [0.2, 0.4]])
    for s in range(2):
        for t in range(2):
            p_sty[s, t, 0, s] = p_st[s, t]
    joint = pc.JointSTXY(p_sty)
    p_t = p_st.sum(axis=0)
    h = -sum(p_st[s, t] * math.log(p_st[s, t] / p_t[t]) for s in range(2) for t in range(2))
    assert pc.conditional_mutual_information(joint) == pytest.approx(h, abs=1e-15)


def test_chi_square_basic():
    assert pc.chi_square_pointwise([0.3, 0.7], [0.3, 0.7]) == 0.0
    d = 0.1
    assert pc.chi_square_pointwise([0.5 + d, 0.5 - d], [0.5, 0.5]) == pytest.approx(4 * d * d, abs=1e-15)


def test_chi_square_perturbation_identity():
    p_s = np.array([0.3088, 0.6913])
    p_s = p_s / p_s.sum()
    u = np.array([-np.sqrt(p_s[1]), np.sqrt(p_s[0])])  # unit, orthogonal to sqrt(P_S)
    eps = 0.01
    cond = p_s + eps * np.sqrt(p_s) * u
    assert pc.chi_square_pointwise(cond, p_s) == pytest.approx(eps**2, abs=1e-10)


def test_chi_square_zero_reference():
    with pytest.raises(ZeroMassReference):
        pc.chi_square_pointwise([0.5, 0.5], [1.0, 0.0])


def test_kl_divergence():
    assert pc.kl_divergence([0.2, 0.8], [0.2, 0.8]) == 0.0
    assert pc.kl_divergence([1.0, 0.0], [0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-15)
    expected = 0.6 * math.log(0.6 / 0.5) + 0.4 * math.log(0.4 / 0.5)
    assert pc.kl_divergence([0.6, 0.4], [0.5, 0.5]) == pytest.approx(expected, abs=1e-16)
    with pytest.raises(AbsoluteContinuityViolation):
        pc.kl_divergence([0.5, 0.5], [1.0, 0.0])


def test_bayes_invert_independent_channel():
    channel = np.array([[0.3, 0.3, 0.3], [0.7, 0.7, 0.7]])
    p_b = np.array([0.2, 0.5, 0.3])
    back, p_a = pc.bayes_invert(channel, p_b)
    np.testing.assert_allclose(p_a, [0.3, 0.7])
    for a in range(2):
        np.testing.assert_allclose(back[:, a], p_b)


def test_bayes_invert_identity():
    back, p_a = pc.bayes_invert(np.eye(3), [0.2, 0.3, 0.5])
    np.testing.assert_allclose(back, np.eye(3))
    np.testing.assert_allclose(p_a, [0.2, 0.3, 0.5])


def test_bayes_invert_zero_output():
    with pytest.raises(ZeroMassOutput):
        pc.bayes_invert([[1.0, 1.0], [0.0, 0.0]], [0.5, 0.5])


def test_bayes_invert_design_round_trip(prior):
    from fairgeom.solver import solve

    d = solve(prior, 0.01, 0.2)
    # re-inversion of the mechanism with P_X recovers P_{X|Y}
    back, p_y = pc.bayes_invert(d.mechanism, prior.p_x)
    np.testing.assert_allclose(back, d.p_x_given_y, atol=1e-12)
    np.testing.assert_allclose(p_y, [0.5, 0.5], atol=1e-12)
    joint = pc.build_joint(prior, d.mechanism)
    p_xy = joint.marginal("X", "Y")
    np.testing.assert_allclose(p_xy / p_xy.sum(axis=0), d.p_x_given_y, atol=1e-12)
