"""Cost trajectories <c, M^t x0> over a finite horizon.

Two evaluators produce identical sequences: a naive O(n^2 T) recurrence, and a
square-root stride scheme that precomputes M^B (B = floor(sqrt T)) by repeated
squaring, the B forward states M^{iB} x0 and the B backward costs (M^T)^j c,
then reads each <c, M^t x0> for t <= B^2 off a single inner product, finishing
any tail t > B^2 sequentially.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrix_core import as_matrix, as_vector, mat_pow


@dataclass(frozen=True)
class CostSequence:
    """Values g(t) = <c, M^t x0> for t = 1..horizon."""

    horizon: int
    values: np.ndarray

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.values.shape != (self.horizon,):
            raise ValueError("values length must equal the horizon")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("cost sequence has non-finite entries")
        self.values.setflags(write=False)


def _check(m, x0, c, horizon):
    a = as_matrix(m)
    x = as_vector(x0)
    cv = as_vector(c)
    if a.shape[0] != a.shape[1]:
        raise ValueError("system matrix must be square")
    if x.shape[0] != a.shape[0] or cv.shape[0] != a.shape[0]:
        raise ValueError("dimension mismatch between matrix, state, and cost")
    if not isinstance(horizon, (int, np.integer)) or horizon < 1:
        raise ValueError(f"horizon must be a positive integer, got {horizon!r}")
    return a, x, cv


def cost_sequence_naive(m, x0, c, horizon: int) -> CostSequence:
    """Sequential recurrence v_{t+1} = M v_t; exact reference evaluator."""
    a, v, cv = _check(m, x0, c, horizon)
    out = np.empty(horizon)
    for t in range(horizon):
        v = a @ v
        out[t] = cv @ v
    return CostSequence(int(horizon), out)


def cost_sequence_strided(m, x0, c, horizon: int) -> CostSequence:
    """Square-root stride evaluator; identical values, fewer passes for large T."""
    a, x, cv = _check(m, x0, c, horizon)
    horizon = int(horizon)
    if horizon < 4:                      # stride buys nothing below B = 2
        return cost_sequence_naive(a, x, cv, horizon)
    big_stride = math.isqrt(horizon)
    n = a.shape[0]

    m_big = mat_pow(a, big_stride)
    fwd = np.empty((big_stride + 1, n))
    fwd[0] = x
    for i in range(1, big_stride + 1):
        fwd[i] = m_big @ fwd[i - 1]
    bwd = np.empty((big_stride, n))
    bwd[0] = cv
    at = a.T
    for j in range(1, big_stride):
        bwd[j] = at @ bwd[j - 1]

    table = bwd @ fwd.T                  # table[j, i] = <(M^T)^j c, M^{iB} x0>
    out = np.empty(horizon)
    square = big_stride * big_stride
    ts = np.arange(1, square + 1)
    out[:square] = table[ts % big_stride, ts // big_stride]

    v = fwd[big_stride]
    for t in range(square, horizon):
        v = a @ v
        out[t] = cv @ v
    return CostSequence(horizon, out)


def rce_finite(seq: CostSequence) -> tuple[int, float]:
    """Worst-case stopping time over t = 1..horizon: argmax of g, earliest tie wins."""
    idx = int(np.argmax(seq.values))
    return idx + 1, float(seq.values[idx])
