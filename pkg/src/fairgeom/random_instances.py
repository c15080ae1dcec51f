"""Seeded random priors and mechanisms for property checks."""
from __future__ import annotations

import numpy as np

from .prob_core import PriorInstance, validate_prior


def random_channel(rng: np.random.Generator, n_out: int, n_in: int, concentration: float = 1.0) -> np.ndarray:
    return rng.dirichlet(np.full(n_out, concentration), size=n_in).T


def random_prior(
    rng: np.random.Generator, n: int, min_sigma: float = 0.05, min_mass: float = 0.02
) -> PriorInstance:
    """Draw a well-conditioned prior; rejection-samples until the thresholds hold."""
    while True:
        p_s_given_t = random_channel(rng, n, n)
        p_t_given_x = random_channel(rng, n, n)
        p_x = rng.dirichlet(np.ones(n))
        sig = min(np.linalg.svd(p_s_given_t, compute_uv=False)[-1], np.linalg.svd(p_t_given_x, compute_uv=False)[-1])
        if sig < min_sigma or p_x.min() < min_mass:
            continue
        prior = validate_prior(p_s_given_t, p_t_given_x, p_x)
        if min(prior.p_t.min(), prior.p_s.min()) >= min_mass:
            return prior
