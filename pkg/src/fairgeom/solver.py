"""Closed-form design of an equalized-odds mechanism.

The design uses a uniform binary Y and the pair of directions ``+-d/K``, where
``d`` is the best unit direction orthogonal to sqrt(P_S) for ``W^{T;Y}`` and
``K >= 1`` shrinks it just enough to meet the approximate rate budget.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import prob_core
from .errors import (
    EpsilonOutOfRange,
    InvalidReconstruction,
    NoFeasibleDirection,
    NonpositiveRate,
)
from .geometry import (
    PerturbationSet,
    WMatrices,
    compute_w_matrices,
    orthogonal_complement,
    singular_triples,
)
from .prob_core import TOL_SIMPLEX, PriorInstance

TOL_SV = 1e-9
TOL_FEASIBLE = 1e-9


def select_direction(w: WMatrices) -> tuple[np.ndarray, bool]:
    """Return ``(direction, used_second_singular)``."""
    triples = singular_triples(w.w_ty)
    top = triples[0]
    if top.sigma < 1.0 - TOL_SV:
        # sqrt(P_S) is always a right singular vector with sigma = 1
        raise NoFeasibleDirection(f"sigma_max = {top.sigma:.12g} < 1 contradicts the unit singular pair")
    if top.sigma > 1.0 + TOL_SV:
        d, used_second = top.right, False
    else:
        basis = orthogonal_complement(w.sqrt_p_s)
        if basis.shape[1] == 0:
            raise NoFeasibleDirection("|S| = 1 leaves no direction orthogonal to sqrt(P_S)")
        d, used_second = basis @ singular_triples(w.w_ty @ basis)[0].right, True
        if d[np.argmax(np.abs(d))] < 0:
            d = -d
    if abs(d @ w.sqrt_p_s) > 1e-8:
        raise NoFeasibleDirection(f"selected direction has overlap {d @ w.sqrt_p_s:.3e} with sqrt(P_S)")
    return d, used_second


def compute_k(epsilon: float, r: float, w_xy: np.ndarray, direction: np.ndarray) -> float:
    """Smallest K >= 1 with 0.5 eps^2 |W^{X;Y} d|^2 <= r K^2."""
    if not r > 0:
        raise NonpositiveRate(f"rate budget must be positive, got {r}")
    if np.isinf(r):
        return 1.0
    return max(1.0, epsilon * float(np.linalg.norm(w_xy @ direction)) / np.sqrt(2.0 * r))


@dataclass(frozen=True)
class DesignBound:
    """The geometric part of a design, available for every epsilon."""

    direction: np.ndarray
    used_second_singular: bool
    sigma: float
    k_constant: float
    epsilon: float
    rate_budget: float
    p2_value: float
    p_y: np.ndarray
    l_vectors: np.ndarray
    within_validity: bool

    def perturbation(self) -> PerturbationSet:
        return PerturbationSet(self.p_y, self.l_vectors, self.epsilon)


@dataclass(frozen=True)
class ExactReport:
    i_ty: float
    i_xy: float
    i_ys_given_t: float
    max_chi2: float


@dataclass(frozen=True)
class DesignResult(DesignBound):
    p_s_given_y: np.ndarray  # columns indexed by y
    p_t_given_y: np.ndarray
    p_x_given_y: np.ndarray
    mechanism: np.ndarray  # P_{Y|X}, rows indexed by y
    exact: ExactReport
    mechanism_stochastic: bool
    exact_for_binary_s: bool


def design_bound(
    prior: PriorInstance, epsilon: float, r: float, w: WMatrices | None = None, warn: bool = True
) -> DesignBound:
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    w = compute_w_matrices(prior) if w is None else w
    d, used_second = select_direction(w)
    k = compute_k(epsilon, r, w.w_xy, d)
    sigma = float(np.linalg.norm(w.w_ty @ d))
    within = w.bounds.contains(epsilon)
    if warn and not within:
        warnings.warn(
            f"epsilon={epsilon:g} >= min(c1, c2)={w.bounds.valid_epsilon_sup:.6g}",
            EpsilonOutOfRange,
            stacklevel=2,
        )
    p_y = np.array([0.5, 0.5])
    l_vectors = np.stack([d / k, -d / k])
    # equals 0.5 eps^2 (sigma / K)^2; evaluated as the objective so both agree bitwise
    p2 = _quadratic(w.w_ty, PerturbationSet(p_y, l_vectors, epsilon))
    return DesignBound(
        direction=d,
        used_second_singular=used_second,
        sigma=sigma,
        k_constant=k,
        epsilon=float(epsilon),
        rate_budget=float(r),
        p2_value=p2,
        p_y=p_y,
        l_vectors=l_vectors,
        within_validity=within,
    )


def _check_columns(name: str, cols: np.ndarray, clamp: bool) -> np.ndarray:
    low = cols.min()
    if low < -TOL_SIMPLEX:
        raise InvalidReconstruction(f"{name} has entry {low:.3e} < 0; epsilon too large for this prior")
    if clamp and low < 0:
        cols = np.clip(cols, 0.0, None)
        cols = cols / cols.sum(axis=0, keepdims=True)
    return cols


def reconstruct_conditionals(
    prior: PriorInstance, l_vectors: np.ndarray, epsilon: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Conditionals P_{S|Y}, P_{T|Y}, P_{X|Y} (columns indexed by y) for directions ``l_vectors``."""
    j = np.sqrt(prior.p_s)[:, None] * np.asarray(l_vectors, dtype=float).T
    dt = np.linalg.solve(prior.p_s_given_t, j)
    dx = np.linalg.solve(prior.p_t_given_x, dt)
    p_s_y = _check_columns("P_{S|Y}", prior.p_s[:, None] + epsilon * j, clamp=False)
    p_t_y = _check_columns("P_{T|Y}", prior.p_t[:, None] + epsilon * dt, clamp=False)
    p_x_y = _check_columns("P_{X|Y}", prior.p_x[:, None] + epsilon * dx, clamp=True)
    return p_s_y, p_t_y, p_x_y


def mechanism_from_perturbation(prior: PriorInstance, pert: PerturbationSet) -> np.ndarray:
    """The mechanism P_{Y|X} realizing ``pert`` on ``prior``."""
    _, _, p_x_y = reconstruct_conditionals(prior, pert.l_vectors, pert.epsilon)
    mechanism, _ = prob_core.bayes_invert(p_x_y, pert.p_y)
    return mechanism


def exact_report(prior: PriorInstance, mechanism: np.ndarray) -> ExactReport:
    joint = prob_core.build_joint(prior, mechanism)
    p_sy = joint.marginal("S", "Y")
    p_y = p_sy.sum(axis=0)
    chi = [prob_core.chi_square_pointwise(p_sy[:, y] / p_y[y], prior.p_s) for y in range(p_y.size) if p_y[y] > 0]
    return ExactReport(
        i_ty=prob_core.mutual_information(joint, "T", "Y"),
        i_xy=prob_core.mutual_information(joint, "X", "Y"),
        i_ys_given_t=prob_core.conditional_mutual_information(joint),
        max_chi2=max(chi),
    )


def solve(prior: PriorInstance, epsilon: float, r: float) -> DesignResult:
    """Closed-form design, its mechanism, and an exact evaluation of it.

    Raises InvalidReconstruction when the design cannot be realized, which
    happens once epsilon is large relative to the prior.
    """
    w = compute_w_matrices(prior)
    bound = design_bound(prior, epsilon, r, w, warn=False)
    if not bound.within_validity:
        warnings.warn(
            f"epsilon={epsilon:g} >= min(c1, c2)={w.bounds.valid_epsilon_sup:.6g}",
            EpsilonOutOfRange,
            stacklevel=2,
        )
    p_s_y, p_t_y, p_x_y = reconstruct_conditionals(prior, bound.l_vectors, bound.epsilon)
    mechanism, _ = prob_core.bayes_invert(p_x_y, bound.p_y)
    stochastic = bool(mechanism.min() >= -TOL_SIMPLEX and np.allclose(mechanism.sum(axis=0), 1.0, atol=TOL_SIMPLEX))
    return DesignResult(
        **bound.__dict__,
        p_s_given_y=p_s_y,
        p_t_given_y=p_t_y,
        p_x_given_y=p_x_y,
        mechanism=mechanism,
        exact=exact_report(prior, mechanism),
        mechanism_stochastic=stochastic,
        exact_for_binary_s=prior.size == 2,
    )


def evaluate_quadratic_objective(w: WMatrices, pert: PerturbationSet, r: float) -> tuple[float, bool]:
    """Approximate utility of ``pert`` and whether it is feasible for the quadratic program."""
    l = pert.l_vectors
    objective = _quadratic(w.w_ty, pert)
    rate = _quadratic(w.w_xy, pert)
    feasible = (
        np.max(np.abs(l @ w.sqrt_p_s)) <= TOL_FEASIBLE
        and np.max(np.abs(pert.p_y @ l)) <= TOL_FEASIBLE
        and np.max(np.sum(l**2, axis=1)) <= 1.0 + TOL_FEASIBLE
        and rate <= r + TOL_FEASIBLE
    )
    return objective, bool(feasible)


@dataclass(frozen=True)
class MarkovReport:
    residuals: np.ndarray
    tol: float = 1e-9

    @property
    def passed(self) -> bool:
        return bool(np.all(self.residuals < self.tol))


def markov_consistency_check(prior: PriorInstance, result: DesignResult) -> MarkovReport:
    """Sup-norm residual of P_{S|X} P_{X|Y=y} against P_{S|Y=y} for each y."""
    predicted = prior.p_s_given_x @ result.p_x_given_y
    return MarkovReport(np.max(np.abs(predicted - result.p_s_given_y), axis=0))


def approximation_errors(
    prior: PriorInstance, p_y, l_vectors, epsilons
) -> list[tuple[float, float, float, float, float]]:
    """Exact vs. second-order I(T;Y) and I(X;Y) for fixed directions over several epsilons.

    Returns rows ``(eps, exact_ty, approx_ty, exact_xy, approx_xy)``.
    """
    w = compute_w_matrices(prior)
    rows = []
    for eps in epsilons:
        pert = PerturbationSet(p_y, l_vectors, eps)
        joint = prob_core.build_joint(prior, mechanism_from_perturbation(prior, pert))
        rows.append(
            (
                float(eps),
                prob_core.mutual_information(joint, "T", "Y"),
                _quadratic(w.w_ty, pert),
                prob_core.mutual_information(joint, "X", "Y"),
                _quadratic(w.w_xy, pert),
            )
        )
    return rows


def _quadratic(m: np.ndarray, pert: PerturbationSet) -> float:
    return 0.5 * pert.epsilon**2 * float(pert.p_y @ np.sum((pert.l_vectors @ m.T) ** 2, axis=1))
