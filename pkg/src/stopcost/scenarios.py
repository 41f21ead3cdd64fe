"""Worked scenarios: an alert-queue overtime model and small epidemic chains.

Two families of examples exercise the estimation pipeline end to end. The
first is a security-operations alert queue: a birth-death chain runs for one
shift to set the end-of-shift backlog, then an overtime chain (arrivals shut
off, the empty state absorbing) drains it while cost grows with queue length.
The second builds SIR/SVIR per-person chains and their population-level joint
chain as a Kronecker power, costing each state by its infected count.

`compare_report` ties these to the estimators: given stopping-time samples it
compares the plug-in cost at the rounded mean against the distributionally
robust value, and uses Monte Carlo rollouts to estimate how often either one
is exceeded in realization.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .finite_horizon import CostSequence, cost_sequence_strided
from .matrix_core import as_matrix, as_vector, mat_pow
from .wasserstein import AmbiguitySet, drce_finite


@dataclass(frozen=True)
class CsocParams:
    arrival_rate: float = 35.0      # alerts per hour per analyst queue
    service_rate: float = 34.0      # alerts per hour
    step_seconds: float = 30.0
    queue_cap: int = 100
    shift_steps: int = 960
    analysts: int = 2
    overtime_min: int = 1
    overtime_max: int = 120
    overtime_mean: int = 61

    def __post_init__(self):
        if self.arrival_rate <= 0 or self.service_rate <= 0 or self.step_seconds <= 0:
            raise ValueError("rates and step length must be positive")
        if self.queue_cap < 1 or self.shift_steps < 1 or self.analysts < 1:
            raise ValueError("queue_cap, shift_steps, and analysts must be >= 1")
        if not (1 <= self.overtime_min <= self.overtime_mean <= self.overtime_max):
            raise ValueError("need 1 <= overtime_min <= overtime_mean <= overtime_max")
        steps_per_hour = 3600.0 / self.step_seconds
        if self.arrival_rate >= steps_per_hour or self.service_rate >= steps_per_hour:
            raise ValueError("per-step event probabilities must stay below 1")

    @property
    def arrival_prob(self) -> float:
        return self.arrival_rate * self.step_seconds / 3600.0

    @property
    def service_prob(self) -> float:
        return self.service_rate * self.step_seconds / 3600.0


@dataclass(frozen=True)
class HealthParams:
    model: str = "sir"              # "sir" or "svir"
    population: int = 5
    horizon_min: int = 1
    horizon_max: int = 15
    horizon_mean: int = 8
    init: tuple[float, ...] | None = None   # per-person distribution

    def __post_init__(self):
        if self.model.lower() not in ("sir", "svir"):
            raise ValueError(f"unknown model {self.model!r}; expected 'sir' or 'svir'")
        if self.population < 1:
            raise ValueError("population must be >= 1")
        if not (1 <= self.horizon_min <= self.horizon_mean <= self.horizon_max):
            raise ValueError("need 1 <= horizon_min <= horizon_mean <= horizon_max")
        if self.init is not None:
            arr = np.asarray(self.init, dtype=float)
            if arr.ndim != 1 or np.any(arr < 0) or abs(arr.sum() - 1.0) > 1e-9:
                raise ValueError("init must be a probability vector")


@dataclass(frozen=True)
class ComparisonReport:
    empirical_cost: float
    drce_cost: float
    pct_exceed_empirical: float
    pct_exceed_drce: float
    t_hat: int
    xi: float
    seed: int

    def __post_init__(self):
        for pct in (self.pct_exceed_empirical, self.pct_exceed_drce):
            if not (0.0 <= pct <= 100.0):
                raise ValueError("exceedance percentages must lie in [0, 100]")

    CSV_HEADER = ("empirical_cost,drce_cost,pct_exceed_empirical,"
                  "pct_exceed_drce,t_hat,xi,seed")

    def csv_row(self) -> str:
        return ",".join([
            f"{self.empirical_cost:.12g}", f"{self.drce_cost:.12g}",
            f"{self.pct_exceed_empirical:.12g}", f"{self.pct_exceed_drce:.12g}",
            str(self.t_hat), f"{self.xi:.12g}", str(self.seed),
        ])

    def summary(self) -> str:
        return "\n".join([
            f"plug-in cost at t_hat={self.t_hat}: {self.empirical_cost:.6g}",
            f"robust cost (radius {self.xi:.6g}): {self.drce_cost:.6g}",
            f"rollouts exceeding plug-in: {self.pct_exceed_empirical:.1f}%",
            f"rollouts exceeding robust: {self.pct_exceed_drce:.1f}%",
            f"seed: {self.seed}",
        ])


def _regular_shift_matrix(p: CsocParams) -> np.ndarray:
    """Birth-death chain for the in-shift queue, columns indexed by from-state.

    Per step, one arrival (probability a) and one service completion
    (probability s) may occur independently: net +1 with a(1-s), net -1 with
    s(1-a) when the queue is nonempty, otherwise hold; the ends clamp.
    """
    a, s = p.arrival_prob, p.service_prob
    up, down = a * (1.0 - s), s * (1.0 - a)
    n = p.queue_cap + 1
    m = np.zeros((n, n))
    for i in range(n):
        stay = 1.0
        if i < p.queue_cap:
            m[i + 1, i] = up
            stay -= up
        if i > 0:
            m[i - 1, i] = down
            stay -= down
        m[i, i] = stay
    return m


def build_csoc_overtime(p: CsocParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Overtime queue model: returns (M, x0, c) on states {0, ..., queue_cap}.

    x0 is the end-of-shift backlog distribution, obtained by running the
    in-shift chain for shift_steps from an empty queue. During overtime the
    arrival stream is off, so the chain is pure death with the empty state
    absorbing. Cost is 0 at an empty queue, 0.5 for one alert, and climbs
    linearly to 1 at the cap.
    """
    u = p.queue_cap
    n = u + 1
    regular = _regular_shift_matrix(p)
    e0 = np.zeros(n)
    e0[0] = 1.0
    x0 = mat_pow(regular, p.shift_steps) @ e0

    s = p.service_prob
    m = np.zeros((n, n))
    m[0, 0] = 1.0
    for i in range(1, n):
        m[i - 1, i] = s
        m[i, i] = 1.0 - s

    c = np.zeros(n)
    if u == 1:
        c[1] = 1.0
    else:
        ks = np.arange(1, n)
        c[1:] = 0.5 + 0.5 * (ks - 1) / (u - 1)
    return m, x0, c


_SIR_STATES = ("S", "I", "R")
_SVIR_STATES = ("S", "V", "I", "R")

# columns are from-states; entries are to-state probabilities
_SIR_MATRIX = np.array([
    [0.2, 0.0, 0.1],
    [0.8, 0.5, 0.0],
    [0.0, 0.5, 0.9],
])
_SVIR_MATRIX = np.array([
    [0.1, 0.1, 0.0, 0.1],
    [0.1, 0.9, 0.0, 0.0],
    [0.8, 0.0, 0.5, 0.0],
    [0.0, 0.0, 0.5, 0.9],
])


def person_chain(model: str) -> tuple[np.ndarray, np.ndarray, int]:
    """Per-person transition matrix, default initial law, and infected index."""
    key = model.lower()
    if key == "sir":
        init = np.array([1.0, 0.0, 0.0])
        return _SIR_MATRIX.copy(), init, _SIR_STATES.index("I")
    if key == "svir":
        init = np.array([0.4, 0.6, 0.0, 0.0])
        return _SVIR_MATRIX.copy(), init, _SVIR_STATES.index("I")
    raise ValueError(f"unknown model {model!r}; expected 'sir' or 'svir'")


def build_health_chain(p: HealthParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Joint population chain: returns (M, x0, c) with M the Kronecker power
    of the per-person chain and c(state) = number of infected persons."""
    person, init, i_idx = person_chain(p.model)
    if p.init is not None:
        init = np.asarray(p.init, dtype=float)
        if init.shape[0] != person.shape[0]:
            raise ValueError(f"init must have {person.shape[0]} entries for {p.model}")
    m = person
    x0 = init
    for _ in range(p.population - 1):
        m = np.kron(m, person)
        x0 = np.kron(x0, init)
    n_states = person.shape[0]
    total = n_states ** p.population
    c = np.zeros(total)
    rem = np.arange(total)
    for _ in range(p.population):
        c += (rem % n_states == i_idx)
        rem //= n_states
    return m, x0, c


def sample_horizons(lo: int, hi: int, mean: int, k: int, seed: int) -> list[int]:
    """k i.i.d. stopping times from a discretized triangular law on [lo, hi]
    with mode at mean, reproducible under the seed."""
    lo, hi, mean, k = int(lo), int(hi), int(mean), int(k)
    if not (1 <= lo <= mean <= hi):
        raise ValueError("need 1 <= lo <= mean <= hi")
    if k < 1:
        raise ValueError("k must be >= 1")
    ts = np.arange(lo, hi + 1)
    weights = np.where(
        ts <= mean,
        (ts - lo + 1.0) / (mean - lo + 1.0),
        (hi - ts + 1.0) / (hi - mean + 1.0),
    )
    weights = weights / weights.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(ts, size=k, p=weights)
    return [int(t) for t in draws]


def _rollout_cost(cum_cols: np.ndarray, cum_x0: np.ndarray, c: np.ndarray,
                  steps: int, rng: np.random.Generator) -> float:
    n = c.shape[0]
    state = min(int(np.searchsorted(cum_x0, rng.random(), side="right")), n - 1)
    for _ in range(steps):
        state = min(int(np.searchsorted(cum_cols[:, state], rng.random(),
                                        side="right")), n - 1)
    return float(c[state])


def compare_report(m, x0, c, samples, xi: float, seed: int, *,
                   copies: int = 1, support_max: int | None = None,
                   tols: Tolerances = DEFAULT_TOLS) -> ComparisonReport:
    """Plug-in versus robust cost on sampled stopping times.

    t_hat is the rounded sample mean and the plug-in estimate is the expected
    cost at exactly t_hat (times `copies` independent replicas of the chain,
    e.g. one queue per analyst). The robust estimate applies drce_finite to
    the empirical horizon distribution on {1, ..., support_max or max sample}
    at radius xi. Monte Carlo rollouts, one per sample with per-sample
    substreams split from the seed, estimate how often the realized cost
    exceeds each estimate.
    """
    a = as_matrix(m)
    x = as_vector(x0)
    cv = as_vector(c)
    n = a.shape[0]
    if a.shape[0] != a.shape[1] or x.shape[0] != n or cv.shape[0] != n:
        raise ValueError("dimension mismatch between matrix, state, and cost")
    if np.any(a < -tols.entry_clamp) or np.any(np.abs(a.sum(axis=0) - 1.0) > tols.column_sum):
        raise ValueError("matrix must be column-stochastic for rollouts")
    if np.any(x < -tols.entry_clamp) or abs(x.sum() - 1.0) > tols.column_sum:
        raise ValueError("x0 must be a probability distribution for rollouts")
    samples = [int(t) for t in samples]
    if not samples:
        raise ValueError("samples must be non-empty")
    if any(t < 1 for t in samples):
        raise ValueError("stopping times must be >= 1")
    if copies < 1:
        raise ValueError("copies must be >= 1")

    k = len(samples)
    t_hat = int(round(sum(samples) / k))
    horizon = max(samples) if support_max is None else int(support_max)
    if horizon < max(samples):
        raise ValueError("support_max is below the largest sample")

    counts = np.bincount(np.asarray(samples), minlength=horizon + 1)
    p_hat = counts[1:horizon + 1] / k
    g = cost_sequence_strided(a, x, cv, horizon).values * copies
    empirical = float(g[t_hat - 1])
    robust = drce_finite(CostSequence(horizon, g),
                         AmbiguitySet(p_hat, float(xi)), tols).value

    cum_cols = np.cumsum(np.clip(a, 0.0, None), axis=0)
    cum_x0 = np.cumsum(np.clip(x, 0.0, None))
    costs = np.empty(k)
    for i, t_i in enumerate(samples):
        stream = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(i,))))
        costs[i] = sum(_rollout_cost(cum_cols, cum_x0, cv, t_i, stream)
                       for _ in range(copies))
    pct_emp = 100.0 * float(np.mean(costs > empirical))
    pct_rob = 100.0 * float(np.mean(costs > robust))
    return ComparisonReport(empirical, robust, pct_emp, pct_rob,
                            t_hat, float(xi), int(seed))
