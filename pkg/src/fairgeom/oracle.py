"""Brute-force ground truth at desk scale.

``grid_search_chi2`` and ``grid_search_eo`` enumerate mechanisms P_{Y|X} on a
uniform simplex grid and evaluate the exact objectives; ``enumerate_geometric``
sweeps the quadratic program's feasible set directly for binary S and Y.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels, prob_core
from .errors import OracleError, TooManyParameters, UnsupportedCardinality
from .geometry import WMatrices, orthogonal_complement
from .prob_core import PriorInstance

MAX_FREE_PARAMETERS = 6
ZERO_MASS_Y = 1e-12
CMI_ASSERT_TOL = 1e-10
TIE_TOL = 1e-14  # utilities closer than this count as tied


@dataclass(frozen=True)
class OracleQuery:
    prior: PriorInstance
    epsilon: float
    r: float
    y_cardinality: int = 2
    grid_points: int = 201
    constraint_slack: float = 1e-9

    def __post_init__(self):
        if self.grid_points < 2:
            raise ValueError(f"grid_points must be >= 2, got {self.grid_points}")
        if self.y_cardinality < 2:
            raise ValueError(f"y_cardinality must be >= 2, got {self.y_cardinality}")

    @property
    def free_parameters(self) -> int:
        return self.prior.size * (self.y_cardinality - 1)


@dataclass(frozen=True)
class OracleResult:
    best_utility: float
    best_mechanism: np.ndarray
    feasible_count: int
    evaluated_count: int
    i_xy_at_best: float
    i_ys_given_t_at_best: float
    max_chi2_at_best: float
    max_cmi_seen: float
    no_feasible_point: bool = False

    @property
    def constraint_values_at_best(self) -> tuple[float, float, float]:
        return self.i_xy_at_best, self.i_ys_given_t_at_best, self.max_chi2_at_best


@lru_cache(maxsize=32)
def column_grid(grid_points: int, y_cardinality: int) -> np.ndarray:
    """All columns on the simplex grid, rows in lexicographic order of the free entries.

    The first ``y_cardinality - 1`` entries are the free parameters, each a
    multiple of ``1 / (grid_points - 1)``; the last entry takes the remainder.
    """
    steps = grid_points - 1
    free = y_cardinality - 1
    rows: list[tuple[int, ...]] = []

    def extend(prefix: tuple[int, ...], remaining: int) -> None:
        if len(prefix) == free:
            rows.append(prefix + (remaining,))
            return
        for k in range(remaining + 1):
            extend(prefix + (k,), remaining - k)

    extend((), steps)
    grid = np.array(rows, dtype=float) / steps
    grid[:, -1] = 1.0 - grid[:, :-1].sum(axis=1)
    grid.setflags(write=False)
    return grid


def _search(q: OracleQuery, chi2_bound: float) -> OracleResult:
    if q.free_parameters > MAX_FREE_PARAMETERS:
        raise TooManyParameters(
            f"|X|*(|Y|-1) = {q.free_parameters} free parameters exceeds the cap of {MAX_FREE_PARAMETERS}"
        )
    grid = column_grid(q.grid_points, q.y_cardinality)
    stx = np.ascontiguousarray(q.prior.joint_stx())
    best_index, best_u, ixy, chi, cmi, feasible, total, max_cmi = kernels.search_grid(
        np.ascontiguousarray(grid), stx, float(q.r), float(chi2_bound), float(q.constraint_slack), ZERO_MASS_Y, TIE_TOL
    )
    if best_index < 0:
        constant = np.zeros((q.y_cardinality, q.prior.size))
        constant[0] = 1.0
        return OracleResult(0.0, constant, 0, total, 0.0, 0.0, 0.0, max_cmi, no_feasible_point=True)
    digits = np.unravel_index(best_index, (grid.shape[0],) * q.prior.size)
    mechanism = grid[list(digits)].T.copy()
    return OracleResult(max(best_u, 0.0), mechanism, feasible, total, ixy, cmi, chi, max_cmi)


def grid_search_chi2(q: OracleQuery) -> OracleResult:
    """Exact optimum of the chi-square-constrained problem over the grid."""
    res = _search(q, q.epsilon**2)
    if res.max_cmi_seen >= CMI_ASSERT_TOL:
        raise OracleError(f"candidate with I(Y;S|T) = {res.max_cmi_seen:.3e} under an S-T-X prior")
    return res


def grid_search_eo(q: OracleQuery) -> OracleResult:
    """Exact optimum with only equalized odds and the rate budget."""
    res = _search(q, math.inf)
    if res.max_cmi_seen >= CMI_ASSERT_TOL:
        raise OracleError(f"candidate with I(Y;S|T) = {res.max_cmi_seen:.3e} under an S-T-X prior")
    return res


def utility_grid_resolution(prior: PriorInstance, mechanism: np.ndarray, grid_points: int, h: float = 1e-6) -> float:
    """First-order change of exact I(T;Y) when each free parameter moves one grid step.

    Computed as ``step * sum_i |dI/dtheta_i|`` with central differences, where
    the free parameters are all rows but the last of each column.
    """
    mechanism = np.asarray(mechanism, dtype=float)
    step = 1.0 / (grid_points - 1)

    def utility(m):
        return prob_core.mutual_information(prob_core.build_joint(prior, m), "T", "Y")

    total = 0.0
    ny, nx = mechanism.shape
    for x in range(nx):
        for y in range(ny - 1):
            delta = np.zeros_like(mechanism)
            delta[y, x], delta[-1, x] = h, -h
            hp = min(h, 1.0 - mechanism[y, x], mechanism[-1, x])
            hm = min(h, mechanism[y, x], 1.0 - mechanism[-1, x])
            if hp + hm <= 0:
                continue
            up = utility(mechanism + delta * (hp / h))
            down = utility(mechanism - delta * (hm / h))
            total += abs(up - down) / (hp + hm)
    return step * total


@dataclass(frozen=True)
class GeometricResult:
    best_objective: float
    p_y1: float
    coefficients: tuple[float, float]
    objective_step: float
    evaluated_count: int
    feasible_count: int


def enumerate_geometric(q: OracleQuery, w: WMatrices) -> GeometricResult:
    """Dense sweep of the quadratic program for binary S and binary Y.

    Directions are ``L_y = a_y u`` with ``u`` the unit vector orthogonal to
    sqrt(P_S); ``P_Y(1)`` and ``a_1`` are gridded and ``a_2`` follows from the
    zero-mean constraint.
    """
    if q.prior.size != 2:
        raise UnsupportedCardinality(f"geometric enumeration needs |S| = 2, got {q.prior.size}")
    if q.y_cardinality != 2:
        raise UnsupportedCardinality(f"geometric enumeration needs |Y| = 2, got {q.y_cardinality}")
    u = orthogonal_complement(w.sqrt_p_s)[:, 0]
    p_grid = np.linspace(0.0, 1.0, q.grid_points)[1:-1]
    a_grid = np.linspace(-1.0, 1.0, q.grid_points)
    p, a1 = np.meshgrid(p_grid, a_grid, indexing="ij")
    a2 = -p * a1 / (1.0 - p)

    half_eps2 = 0.5 * q.epsilon**2
    ty = np.linalg.norm(w.w_ty @ u) ** 2
    xy = np.linalg.norm(w.w_xy @ u) ** 2

    def quad(weight: float, p_, a1_, a2_):
        # L_y = a_y u, so |W L_y|^2 = a_y^2 |W u|^2
        return half_eps2 * weight * (p_ * a1_**2 + (1.0 - p_) * a2_**2)

    objective = quad(ty, p, a1, a2)
    rate = quad(xy, p, a1, a2)
    slack = q.constraint_slack
    ok = (np.abs(a2) <= 1.0 + slack) & (rate <= q.r + slack)
    masked = np.where(ok, objective, -np.inf)
    flat = int(np.argmax(masked))
    i, j = np.unravel_index(flat, masked.shape)
    best = float(masked[i, j])

    neighbours = []
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        ii, jj = i + di, j + dj
        if 0 <= ii < objective.shape[0] and 0 <= jj < objective.shape[1]:
            neighbours.append(abs(objective[ii, jj] - objective[i, j]))
    return GeometricResult(
        best_objective=best,
        p_y1=float(p[i, j]),
        coefficients=(float(a1[i, j]), float(a2[i, j])),
        objective_step=float(max(neighbours)),
        evaluated_count=int(objective.size),
        feasible_count=int(ok.sum()),
    )
