"""Markov chains and their centered, reduced linear-system form.

An ergodic chain on n states, viewed through the fixed (n-1) x n difference
operators A and B below, becomes a globally asymptotically stable linear system
of dimension n-1: v_t = A (x_t - pi) evolves as v_{t+1} = m_bar v_t with
spectral radius < 1, and x_t = B v_t + pi recovers the distribution. Linear
costs transfer exactly: <c, x_t> = <B^T c, v_t> + <c, pi>.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOLS, Tolerances
from .matrix_core import as_matrix, as_vector, spectral_radius


def _validate_transition(m, tols: Tolerances) -> np.ndarray:
    a = as_matrix(m)
    n = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise ValueError("transition matrix must be square")
    if np.any(a < -tols.entry_clamp):
        raise ValueError("transition matrix has negative entries")
    colsums = a.sum(axis=0)
    if np.abs(colsums - 1.0).max() > tols.column_sum:
        raise ValueError(
            f"columns must sum to 1 within {tols.column_sum:g} "
            f"(worst deviation {np.abs(colsums - 1.0).max():.3e})"
        )
    a = a.copy()
    a[(a < 0) & (a > -tols.entry_clamp)] = 0.0   # clamp numeric noise
    return a


def stationary(m, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """Stationary distribution via shifted inverse iteration at the unit eigenvalue."""
    a = _validate_transition(m, tols)
    n = a.shape[0]
    lam = np.linalg.eigvals(a)
    if int(np.sum(np.abs(lam) >= 1.0 - 1e-9)) != 1:
        raise ValueError("multiple unit-magnitude eigenvalues: chain is not ergodic enough")
    shift = 1.0 + 1e-11
    lu, piv = scipy.linalg.lu_factor(a - shift * np.eye(n))
    v = np.full(n, 1.0 / n)
    best, best_res = None, np.inf
    for _ in range(100):
        y = scipy.linalg.lu_solve((lu, piv), v)
        s = y.sum()
        if s == 0.0:
            raise RuntimeError("inverse iteration broke down")
        y /= s
        res = np.abs(a @ y - y).max()
        if res < best_res:
            best, best_res = y, res
        elif best_res <= tols.stationary_residual:
            break                         # converged and no longer improving
        v = y
    if best is None or best_res > tols.stationary_residual:
        raise RuntimeError("inverse iteration did not converge")
    best = np.where(np.abs(best) < tols.entry_clamp, 0.0, best)
    return best / best.sum()


@dataclass(frozen=True)
class MarkovChain:
    """Column-stochastic transition matrix together with its stationary law."""

    n: int
    transition: np.ndarray
    stationary: np.ndarray

    def __post_init__(self):
        self.transition.setflags(write=False)
        self.stationary.setflags(write=False)

    @classmethod
    def from_transition(cls, m, tols: Tolerances = DEFAULT_TOLS) -> "MarkovChain":
        a = _validate_transition(m, tols)
        pi = stationary(a, tols)
        if np.abs(a @ pi - pi).max() > 1e-8:
            raise ValueError("stationary residual exceeds 1e-8")
        return cls(a.shape[0], a, pi)


@dataclass(frozen=True)
class GasSystem:
    """Reduced (n-1)-dimensional stable system equivalent to a chain."""

    m_bar: np.ndarray
    a_op: np.ndarray
    b_op: np.ndarray
    stationary: np.ndarray
    cost_offset: float = 0.0

    def __post_init__(self):
        n = self.stationary.shape[0]
        if n < 2:
            raise ValueError("need at least 2 states")
        if self.m_bar.shape != (n - 1, n - 1) or self.a_op.shape != (n - 1, n) \
                or self.b_op.shape != (n, n - 1):
            raise ValueError("operator dimensions are inconsistent with the state count")
        for arr in (self.m_bar, self.a_op, self.b_op, self.stationary):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return self.stationary.shape[0]


def build_ab(n: int) -> tuple[np.ndarray, np.ndarray]:
    """The (n-1) x n cumulative-sum operator A and its right inverse B.

    A has ones on and below the diagonal; B is bidiagonal with +1 on the
    diagonal and -1 just below, so every column of B sums to zero and
    A B = I_{n-1}.
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"need at least 2 states, got {n!r}")
    a = np.tril(np.ones((n - 1, n)))
    b = np.zeros((n, n - 1))
    idx = np.arange(n - 1)
    b[idx, idx] = 1.0
    b[idx + 1, idx] = -1.0
    return a, b


def to_gas(chain: MarkovChain, tols: Tolerances = DEFAULT_TOLS) -> GasSystem:
    """Reduce a chain to its stable centered form m_bar = A M B."""
    a, b = build_ab(chain.n)
    m_bar = a @ chain.transition @ b
    if spectral_radius(m_bar) >= 1.0:
        raise ValueError("reduced system has spectral radius >= 1; chain is not ergodic")
    return GasSystem(m_bar, a, b, chain.stationary.copy())


def project_state(gas: GasSystem, x, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """v = A (x - pi); x must lie on the probability simplex (sum 1)."""
    xv = as_vector(x)
    if xv.shape[0] != gas.n:
        raise ValueError("state dimension mismatch")
    if abs(xv.sum() - 1.0) > tols.balance:
        raise ValueError("state components must sum to 1")
    return gas.a_op @ (xv - gas.stationary)


def recover_state(gas: GasSystem, v) -> np.ndarray:
    """x = B v + pi, the inverse of project_state on the simplex."""
    vv = as_vector(v)
    if vv.shape[0] != gas.n - 1:
        raise ValueError("reduced-state dimension mismatch")
    return gas.b_op @ vv + gas.stationary


def transfer_cost(gas: GasSystem, c) -> tuple[np.ndarray, float]:
    """Rewrite <c, x> as <B^T c, v> + <c, pi>: returns (reduced cost, offset)."""
    cv = as_vector(c)
    if cv.shape[0] != gas.n:
        raise ValueError("cost dimension mismatch")
    return gas.b_op.T @ cv, float(cv @ gas.stationary)
