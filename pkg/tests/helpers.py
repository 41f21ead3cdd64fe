"""Shared generators for randomized tests."""
import numpy as np


def random_chain(rng, n):
    """Column-stochastic transition matrix with strictly positive entries."""
    raw = rng.random((n, n)) + 0.05
    return raw / raw.sum(axis=0)


def random_stable(rng, n, rho_max=0.9):
    """Dense matrix rescaled to a random spectral radius below rho_max."""
    m = rng.standard_normal((n, n))
    radius = np.abs(np.linalg.eigvals(m)).max()
    if radius < 1e-9:
        m = m + np.eye(n)
        radius = np.abs(np.linalg.eigvals(m)).max()
    target = rho_max * (0.3 + 0.7 * rng.random())
    return m * (target / radius)


def random_distribution(rng, t):
    p = rng.random(t) + 1e-3
    return p / p.sum()
