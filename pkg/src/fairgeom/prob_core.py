"""Exact discrete-probability machinery.

Distributions are plain 1-D numpy arrays and channels are column-stochastic
2-D arrays with ``channel[out, in] = P(out | in)``. The validators in this
module return float64 copies and raise on anything off the simplex.

All information measures are in nats and use the ``0 log 0 = 0`` convention.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AbsoluteContinuityViolation,
    DimensionMismatch,
    NotStochastic,
    SingularChannel,
    ZeroMassMarginal,
    ZeroMassOutput,
    ZeroMassReference,
)

TOL_SIMPLEX = 1e-9
TOL_RANK = 1e-10
TOL_ZERO_INFO = 1e-12

AXES = "STXY"


def prob_vector(values, tol: float = TOL_SIMPLEX) -> np.ndarray:
    p = np.array(values, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise DimensionMismatch(f"expected a non-empty vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise NotStochastic("vector has non-finite entries")
    if p.min() < -tol:
        raise NotStochastic(f"negative entry {p.min():.3e}")
    if abs(p.sum() - 1.0) > tol:
        raise NotStochastic(f"entries sum to {p.sum():.12g}, not 1")
    return p


def channel_matrix(values, invertible: bool = False, tol: float = TOL_SIMPLEX) -> np.ndarray:
    """Validate a column-stochastic matrix (rows = outputs, columns = inputs)."""
    m = np.array(values, dtype=float)
    if m.ndim != 2 or m.size == 0:
        raise DimensionMismatch(f"expected a non-empty matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NotStochastic("matrix has non-finite entries")
    if m.min() < -tol:
        raise NotStochastic(f"negative entry {m.min():.3e}")
    sums = m.sum(axis=0)
    bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
    if bad.size:
        raise NotStochastic(f"column {bad[0]} sums to {sums[bad[0]]:.12g}")
    if invertible:
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"invertible channel must be square, got {m.shape}")
        smin = np.linalg.svd(m, compute_uv=False)[-1]
        if smin <= TOL_RANK:
            raise SingularChannel(f"smallest singular value {smin:.3e} <= {TOL_RANK}")
    return m


@dataclass(frozen=True)
class PriorInstance:
    """Validated prior under the Markov chain S - T - X."""

    p_s_given_t: np.ndarray
    p_t_given_x: np.ndarray
    p_x: np.ndarray
    p_t: np.ndarray
    p_s: np.ndarray

    @property
    def size(self) -> int:
        return self.p_x.size

    @property
    def p_s_given_x(self) -> np.ndarray:
        return self.p_s_given_t @ self.p_t_given_x

    def joint_stx(self) -> np.ndarray:
        """P(s, t, x) as a 3-D array."""
        return self.p_s_given_t[:, :, None] * (self.p_t_given_x * self.p_x[None, :])[None, :, :]


def validate_prior(p_s_given_t, p_t_given_x, p_x) -> PriorInstance:
    p_s_given_t = channel_matrix(p_s_given_t)
    p_t_given_x = channel_matrix(p_t_given_x)
    p_x = prob_vector(p_x)
    n = p_x.size
    for name, m in (("p_s_given_t", p_s_given_t), ("p_t_given_x", p_t_given_x)):
        if m.shape != (n, n):
            raise DimensionMismatch(f"{name} has shape {m.shape}, expected ({n}, {n})")
    channel_matrix(p_s_given_t, invertible=True)
    channel_matrix(p_t_given_x, invertible=True)

    p_t = p_t_given_x @ p_x
    p_s = p_s_given_t @ p_t
    for name, p in (("P_X", p_x), ("P_T", p_t), ("P_S", p_s)):
        if p.min() <= 0.0:
            raise ZeroMassMarginal(f"{name} has a zero-mass entry: {p}")
    return PriorInstance(p_s_given_t, p_t_given_x, p_x, p_t, p_s)


@dataclass(frozen=True)
class JointSTXY:
    """Joint distribution indexed ``p[s, t, x, y]``."""

    p: np.ndarray

    def marginal(self, *names: str) -> np.ndarray:
        """Marginal over the named variables, axes in the order given."""
        idx = [_axis(n) for n in names]
        if len(set(idx)) != len(idx):
            raise DimensionMismatch(f"repeated variable in {names}")
        drop = tuple(i for i in range(4) if i not in idx)
        m = self.p.sum(axis=drop)
        kept = sorted(idx)
        return np.moveaxis(m, [kept.index(i) for i in idx], range(len(idx)))


def _axis(name: str) -> int:
    try:
        return AXES.index(name.upper())
    except ValueError:
        raise DimensionMismatch(f"unknown variable {name!r}; expected one of {AXES}") from None


def build_joint(prior: PriorInstance, mechanism) -> JointSTXY:
    """Compose the prior with a mechanism ``P_{Y|X}`` (shape ``(|Y|, |X|)``)."""
    mech = channel_matrix(mechanism)
    if mech.shape[1] != prior.size:
        raise DimensionMismatch(f"mechanism has {mech.shape[1]} columns, prior has |X| = {prior.size}")
    return JointSTXY(prior.joint_stx()[:, :, :, None] * mech.T[None, None, :, :])


def _xlogy_ratio(num: np.ndarray, den: np.ndarray) -> float:
    mask = num > 0
    return float(np.sum(num[mask] * np.log(num[mask] / den[mask])))


def mutual_information(joint: JointSTXY, var_a: str, var_b: str) -> float:
    p_ab = joint.marginal(var_a, var_b)
    p_a = p_ab.sum(axis=1)
    p_b = p_ab.sum(axis=0)
    return _xlogy_ratio(p_ab, np.outer(p_a, p_b))


def conditional_mutual_information(
    joint: JointSTXY, var_a: str = "Y", var_b: str = "S", given: str = "T"
) -> float:
    """I(A;B|C); defaults to the equalized-odds quantity I(Y;S|T)."""
    p_abc = joint.marginal(var_a, var_b, given)
    p_ac = p_abc.sum(axis=1)
    p_bc = p_abc.sum(axis=0)
    p_c = p_abc.sum(axis=(0, 1))
    den = p_ac[:, None, :] * p_bc[None, :, :]
    num = p_abc * p_c[None, None, :]
    mask = p_abc > 0
    return float(np.sum(p_abc[mask] * np.log(num[mask] / den[mask])))


def chi_square_pointwise(p_cond, p_ref) -> float:
    """sum_s (p_cond(s) - p_ref(s))^2 / p_ref(s)."""
    p_cond = np.asarray(p_cond, dtype=float)
    p_ref = np.asarray(p_ref, dtype=float)
    if p_cond.shape != p_ref.shape:
        raise DimensionMismatch(f"{p_cond.shape} vs {p_ref.shape}")
    if p_ref.min() <= 0.0:
        raise ZeroMassReference("reference distribution must be strictly positive")
    return float(np.sum((p_cond - p_ref) ** 2 / p_ref))


def kl_divergence(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DimensionMismatch(f"{p.shape} vs {q.shape}")
    if np.any((p > 0) & (q <= 0)):
        raise AbsoluteContinuityViolation("q vanishes where p has mass")
    return _xlogy_ratio(p, q)


def bayes_invert(channel, p_b) -> tuple[np.ndarray, np.ndarray]:
    """Turn ``P_{A|B}`` and ``P_B`` into ``(P_{B|A}, P_A)``."""
    channel = channel_matrix(channel)
    p_b = prob_vector(p_b)
    if channel.shape[1] != p_b.size:
        raise DimensionMismatch(f"channel has {channel.shape[1]} inputs, p_b has {p_b.size}")
    if p_b.min() <= 0.0:
        raise ZeroMassMarginal("p_b must be strictly positive")
    joint_ab = channel * p_b[None, :]
    p_a = joint_ab.sum(axis=1)
    if p_a.min() <= 0.0:
        raise ZeroMassOutput(f"output symbol {int(np.argmin(p_a))} has zero mass")
    return (joint_ab / p_a[:, None]).T, p_a
