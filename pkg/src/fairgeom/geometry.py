"""Perturbation geometry around P_S.

A design is described by weights ``P_Y`` and directions ``L_y`` such that

    P_{S|Y=y} = P_S + eps * [sqrt(P_S)] L_y.

The whitened inverse channels ``W^{T;Y}`` and ``W^{X;Y}`` map ``L_y`` to the
perturbations of ``P_{T|Y=y}`` and ``P_{X|Y=y}`` (again whitened), so squared
image norms give the second-order expansions of I(T;Y) and I(X;Y).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, EpsilonOutOfRange, InvalidPerturbation
from .prob_core import PriorInstance, prob_vector

TOL_PERTURBATION = 1e-9


@dataclass(frozen=True)
class EpsilonBounds:
    c1: float
    c2: float

    @property
    def valid_epsilon_sup(self) -> float:
        return min(self.c1, self.c2)

    def contains(self, epsilon: float) -> bool:
        return epsilon < self.valid_epsilon_sup


@dataclass(frozen=True)
class WMatrices:
    w_ty: np.ndarray
    w_xy: np.ndarray
    sqrt_p_s: np.ndarray
    sqrt_p_t: np.ndarray
    sqrt_p_x: np.ndarray
    bounds: EpsilonBounds


@dataclass(frozen=True)
class SingularTriple:
    sigma: float
    left: np.ndarray
    right: np.ndarray


@dataclass(frozen=True)
class PerturbationSet:
    """Weights ``p_y`` and one direction per row of ``l_vectors``."""

    p_y: np.ndarray
    l_vectors: np.ndarray
    epsilon: float

    def __post_init__(self):
        p_y = prob_vector(self.p_y)
        l_vectors = np.atleast_2d(np.asarray(self.l_vectors, dtype=float))
        if l_vectors.shape[0] != p_y.size:
            raise DimensionMismatch(f"{l_vectors.shape[0]} directions for {p_y.size} outcomes")
        if not self.epsilon > 0:
            raise InvalidPerturbation(f"epsilon must be positive, got {self.epsilon}")
        object.__setattr__(self, "p_y", p_y)
        object.__setattr__(self, "l_vectors", l_vectors)


@dataclass(frozen=True)
class PerturbationReport:
    orthogonality_residual: float
    zero_mean_residual: float
    max_norm_sq: float
    min_conditional_entry: float
    tol: float = TOL_PERTURBATION

    @property
    def orthogonal(self) -> bool:
        return self.orthogonality_residual < self.tol

    @property
    def zero_mean(self) -> bool:
        return self.zero_mean_residual < self.tol

    @property
    def norm_bounded(self) -> bool:
        return self.max_norm_sq <= 1.0 + self.tol

    @property
    def nonnegative(self) -> bool:
        return self.min_conditional_entry >= -self.tol

    @property
    def passed(self) -> bool:
        return self.orthogonal and self.zero_mean and self.norm_bounded and self.nonnegative

    def failures(self) -> list[str]:
        names = ("orthogonal", "zero_mean", "norm_bounded", "nonnegative")
        return [n for n in names if not getattr(self, n)]


def _sigma_range(m: np.ndarray) -> tuple[float, float]:
    s = np.linalg.svd(m, compute_uv=False)
    return float(s[0]), float(s[-1])


def compute_epsilon_bounds(prior: PriorInstance) -> EpsilonBounds:
    inv_chain = np.linalg.inv(prior.p_t_given_x) @ np.linalg.inv(prior.p_s_given_t)
    sqrt_max_ps = np.sqrt(prior.p_s.max())
    c1 = prior.p_x.min() / (_sigma_range(inv_chain)[0] * sqrt_max_ps)
    c2 = _sigma_range(prior.p_s_given_t)[1] * prior.p_t.min() / sqrt_max_ps
    return EpsilonBounds(float(c1), float(c2))


def compute_w_matrices(prior: PriorInstance) -> WMatrices:
    sqrt_p_s = np.sqrt(prior.p_s)
    sqrt_p_t = np.sqrt(prior.p_t)
    sqrt_p_x = np.sqrt(prior.p_x)
    # inv(P_{S|T}) [sqrt P_S] without forming the inverse explicitly
    st_inv = np.linalg.solve(prior.p_s_given_t, np.diag(sqrt_p_s))
    w_ty = st_inv / sqrt_p_t[:, None]
    w_xy = np.linalg.solve(prior.p_t_given_x, st_inv) / sqrt_p_x[:, None]
    if not (np.all(np.isfinite(w_ty)) and np.all(np.isfinite(w_xy))):
        raise ConvergenceFailure("W matrices are not finite")
    return WMatrices(w_ty, w_xy, sqrt_p_s, sqrt_p_t, sqrt_p_x, compute_epsilon_bounds(prior))


def _jacobi_svd(m: np.ndarray, max_sweeps: int = 100, tol: float = 1e-15):
    """One-sided Jacobi SVD, used only when LAPACK fails to converge."""
    a = np.array(m, dtype=float)
    n = a.shape[1]
    v = np.eye(n)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = a[:, p] @ a[:, p]
                beta = a[:, q] @ a[:, q]
                gamma = a[:, p] @ a[:, q]
                if abs(gamma) <= tol * np.sqrt(alpha * beta) or gamma == 0.0:
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * ap - s * aq, s * ap + c * aq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
        if not rotated:
            break
    else:
        raise ConvergenceFailure(f"Jacobi SVD did not converge in {max_sweeps} sweeps")
    sigma = np.linalg.norm(a, axis=0)
    u = np.zeros_like(a)
    nz = sigma > 0
    u[:, nz] = a[:, nz] / sigma[nz]
    return u, sigma, v.T


def singular_triples(m, tie_tol: float = 1e-12) -> list[SingularTriple]:
    """Singular triples ordered by descending sigma.

    Each right vector is flipped so its largest-magnitude entry is positive;
    near-equal sigmas are ordered lexicographically by right vector.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or not np.all(np.isfinite(m)):
        raise DimensionMismatch("singular_triples needs a finite 2-D matrix")
    try:
        u, s, vt = np.linalg.svd(m)
    except np.linalg.LinAlgError:
        u, s, vt = _jacobi_svd(m)
    k = min(m.shape)
    triples = []
    for i in range(k):
        right = vt[i].copy()
        left = u[:, i].copy()
        if right[np.argmax(np.abs(right))] < 0:
            right, left = -right, -left
        triples.append(SingularTriple(float(s[i]), left, right))
    scale = max(triples[0].sigma, 1.0) if triples else 1.0
    triples.sort(key=lambda t: (-round(t.sigma / (tie_tol * scale)), tuple(t.right)))
    return triples


def orthogonal_complement(v: np.ndarray) -> np.ndarray:
    """Orthonormal basis (as columns) of the complement of ``v``."""
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    _, _, vt = np.linalg.svd(v[None, :])
    return vt[1:].T


def validate_perturbation(pert: PerturbationSet, prior: PriorInstance) -> PerturbationReport:
    n = prior.size
    if pert.l_vectors.shape[1] != n:
        raise DimensionMismatch(f"directions have dimension {pert.l_vectors.shape[1]}, |S| = {n}")
    sqrt_p_s = np.sqrt(prior.p_s)
    cond = prior.p_s[None, :] + pert.epsilon * pert.l_vectors * sqrt_p_s[None, :]
    return PerturbationReport(
        orthogonality_residual=float(np.max(np.abs(pert.l_vectors @ sqrt_p_s))),
        zero_mean_residual=float(np.max(np.abs(pert.p_y @ pert.l_vectors))),
        max_norm_sq=float(np.max(np.sum(pert.l_vectors**2, axis=1))),
        min_conditional_entry=float(cond.min()),
    )


def _check_structure(w: WMatrices, pert: PerturbationSet) -> None:
    if pert.l_vectors.shape[1] != w.sqrt_p_s.size:
        raise DimensionMismatch(f"directions have dimension {pert.l_vectors.shape[1]}, |S| = {w.sqrt_p_s.size}")
    ortho = np.max(np.abs(pert.l_vectors @ w.sqrt_p_s))
    mean = np.max(np.abs(pert.p_y @ pert.l_vectors))
    norm_sq = np.max(np.sum(pert.l_vectors**2, axis=1))
    if ortho >= TOL_PERTURBATION:
        raise InvalidPerturbation(f"direction not orthogonal to sqrt(P_S): residual {ortho:.3e}")
    if mean >= TOL_PERTURBATION:
        raise InvalidPerturbation(f"weighted directions do not sum to zero: residual {mean:.3e}")
    if norm_sq > 1.0 + TOL_PERTURBATION:
        raise InvalidPerturbation(f"direction norm^2 {norm_sq:.6g} exceeds 1")


def _quadratic_form(w: np.ndarray, pert: PerturbationSet) -> float:
    images = pert.l_vectors @ w.T
    return 0.5 * pert.epsilon**2 * float(pert.p_y @ np.sum(images**2, axis=1))


def approx_mi_ty(w: WMatrices, pert: PerturbationSet) -> float:
    """Second-order approximation of I(T;Y) in nats."""
    _check_structure(w, pert)
    if pert.epsilon >= w.bounds.c2:
        warnings.warn(f"epsilon={pert.epsilon:g} >= c2={w.bounds.c2:.6g}", EpsilonOutOfRange, stacklevel=2)
    return _quadratic_form(w.w_ty, pert)


def approx_mi_xy(w: WMatrices, pert: PerturbationSet) -> float:
    """Second-order approximation of I(X;Y) in nats."""
    _check_structure(w, pert)
    if pert.epsilon >= w.bounds.c1:
        warnings.warn(f"epsilon={pert.epsilon:g} >= c1={w.bounds.c1:.6g}", EpsilonOutOfRange, stacklevel=2)
    return _quadratic_form(w.w_xy, pert)
