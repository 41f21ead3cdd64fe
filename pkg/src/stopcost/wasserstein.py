"""Wasserstein-1 geometry on finite stopping-time distributions.

The dual norm of a balanced vector mu (entries summing to zero) under a ground
metric d is max { mu.x : |x_i - x_j| <= d_ij }, which is finite once x is
restricted to the sum-zero hyperplane. Its unit ball is the convex hull of the
scaled pair differences (e_i - e_j)/d_ij; for the line metric d_ij = |i - j|
the adjacent differences +-(e_i - e_{i+1}) already span the ball, which powers
both a vertex-enumeration fast path and a compact LP for worst-case costs over
the ball intersected with the simplex.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .finite_horizon import CostSequence, cost_sequence_strided
from .lp_solver import LinearProgram, lp_solve
from .matrix_core import as_matrix, as_vector


@dataclass(frozen=True)
class GroundDistance:
    """Metric on horizon points 1..T: the default line metric |i - j|, or explicit."""

    kind: str = "line"
    matrix: np.ndarray | None = None

    @classmethod
    def line(cls) -> "GroundDistance":
        return cls("line", None)

    @classmethod
    def explicit(cls, matrix) -> "GroundDistance":
        d = as_matrix(matrix)
        t = d.shape[0]
        if d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        if np.abs(np.diag(d)).max(initial=0.0) > 0:
            raise ValueError("distance matrix must have a zero diagonal")
        if np.abs(d - d.T).max(initial=0.0) > 1e-12:
            raise ValueError("distance matrix must be symmetric")
        off = d[~np.eye(t, dtype=bool)]
        if off.size and off.min() <= 0:
            raise ValueError("off-diagonal distances must be positive")
        for k in range(t):
            if np.any(d > d[:, [k]] + d[[k], :] + 1e-12):
                raise ValueError("distance matrix violates the triangle inequality")
        return cls("explicit", d)

    def materialize(self, t: int) -> np.ndarray:
        if self.kind == "line":
            idx = np.arange(1, t + 1, dtype=float)
            return np.abs(idx[:, None] - idx[None, :])
        if self.matrix.shape[0] != t:
            raise ValueError(f"distance matrix is {self.matrix.shape[0]}x"
                             f"{self.matrix.shape[0]}, expected {t}x{t}")
        return self.matrix


@dataclass(frozen=True)
class AmbiguitySet:
    """Wasserstein ball of radius xi around a nominal stopping distribution."""

    nominal: np.ndarray
    radius: float
    distance: GroundDistance = field(default_factory=GroundDistance.line)

    def __post_init__(self):
        p = as_vector(self.nominal)
        if abs(p.sum() - 1.0) > DEFAULT_TOLS.balance:
            raise ValueError("nominal distribution must sum to 1")
        if p.min(initial=0.0) < -DEFAULT_TOLS.entry_clamp:
            raise ValueError("nominal distribution has negative entries")
        p = np.where(p < 0, 0.0, p)
        object.__setattr__(self, "nominal", p)
        p.setflags(write=False)
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")


@dataclass(frozen=True)
class DrceSolution:
    value: float
    worst_q: np.ndarray
    case_used: str                    # "vertex-enumeration" | "lp"


def w_norm(mu, distance: GroundDistance = GroundDistance.line(),
           tols: Tolerances = DEFAULT_TOLS) -> float:
    """Dual norm of a balanced vector: LP over the bounded slice of the dual ball."""
    v = as_vector(mu)
    t = v.shape[0]
    if abs(v.sum()) > tols.balance:
        raise ValueError("w_norm requires entries summing to zero")
    if t == 1:
        return 0.0
    d = distance.materialize(t)
    rows = []
    rhs = []
    for i in range(t):
        for j in range(t):
            if i != j:
                r = np.zeros(t)
                r[i], r[j] = 1.0, -1.0
                rows.append(r)
                rhs.append(d[i, j])
    lp = LinearProgram.maximize(
        v,
        ineq=(np.array(rows), np.array(rhs)),
        eq=(np.ones((1, t)), np.zeros(1)),
        nonneg=False,
    )
    sol = lp_solve(lp, tols)
    if sol.status != "optimal":
        raise RuntimeError(f"norm LP unexpectedly {sol.status}")
    return sol.value


def w1_distance(p, q, distance: GroundDistance = GroundDistance.line(),
                tols: Tolerances = DEFAULT_TOLS) -> float:
    """Wasserstein-1 distance between two distributions on 1..T."""
    pv, qv = as_vector(p), as_vector(q)
    if pv.shape != qv.shape:
        raise ValueError("distributions must share a support size")
    for name, v in (("first", pv), ("second", qv)):
        if abs(v.sum() - 1.0) > tols.balance or v.min(initial=0.0) < -tols.entry_clamp:
            raise ValueError(f"{name} argument is not a probability distribution")
    return w_norm(pv - qv, distance, tols)


def unit_ball_vertices(t: int) -> list[np.ndarray]:
    """Extreme points of the line-metric unit ball: +-(e_i - e_{i+1}), i ascending, + first."""
    if not isinstance(t, (int, np.integer)) or t < 2:
        raise ValueError("need a horizon of at least 2")
    out = []
    for i in range(t - 1):
        v = np.zeros(t)
        v[i], v[i + 1] = 1.0, -1.0
        out.append(v)
        out.append(-v)
    return out


def _hull_vertices(t: int, d: np.ndarray) -> list[np.ndarray]:
    # general metric: all scaled pair differences (e_i - e_j)/d_ij
    out = []
    for i in range(t):
        for j in range(t):
            if i != j:
                v = np.zeros(t)
                v[i], v[j] = 1.0, -1.0
                out.append(v / d[i, j])
    return out


def _drce_lp(g: np.ndarray, p_hat: np.ndarray, xi: float,
             vertices: list[np.ndarray], tols: Tolerances) -> DrceSolution:
    t = p_hat.shape[0]
    k = len(vertices)
    nvar = t + k
    obj = np.concatenate([g, np.zeros(k)])
    # q - xi * V lambda = p_hat   and   sum lambda = 1
    eq = np.zeros((t + 1, nvar))
    eq[:t, :t] = np.eye(t)
    for idx, v in enumerate(vertices):
        eq[:t, t + idx] = -xi * v
    eq[t, t:] = 1.0
    rhs = np.concatenate([p_hat, [1.0]])
    sol = lp_solve(LinearProgram.maximize(obj, eq=(eq, rhs), nonneg=True), tols)
    if sol.status != "optimal":
        raise RuntimeError(f"worst-case LP unexpectedly {sol.status}: internal bug")
    q = sol.point[:t]
    return DrceSolution(float(sol.value), q, "lp")


def drce_finite(seq: CostSequence, amb: AmbiguitySet,
                tols: Tolerances = DEFAULT_TOLS) -> DrceSolution:
    """Worst expected cost over the Wasserstein ball (intersected with the simplex).

    With the line metric, when every shifted vertex p_hat +- xi (e_i - e_{i+1})
    stays entrywise nonnegative the optimum sits at one of those vertices and is
    found by direct enumeration (earliest index and + direction win ties);
    otherwise, and for explicit metrics, the hull LP is solved.
    """
    g = seq.values
    p_hat = amb.nominal
    xi = float(amb.radius)
    if seq.horizon != p_hat.shape[0]:
        raise ValueError("cost horizon and nominal support differ")
    t = seq.horizon
    if t == 1:
        return DrceSolution(float(g[0]), p_hat.copy(), "vertex-enumeration")

    if amb.distance.kind != "line":
        d = amb.distance.materialize(t)
        return _drce_lp(g, p_hat, xi, _hull_vertices(t, d), tols)

    vertices = unit_ball_vertices(t)
    shifted = [p_hat + xi * v for v in vertices]
    worst_entry = min(s.min() for s in shifted)
    if worst_entry >= tols.vertex_boundary:
        # enumeration order is the tie-break: ascending i, + before -; the center
        # p_hat is evaluated too but can never strictly beat the best vertex
        best_val, best_q = float(g @ shifted[0]), shifted[0]
        for q in shifted[1:]:
            val = float(g @ q)
            if val > best_val:
                best_val, best_q = val, q
        center = float(g @ p_hat)
        if center > best_val:
            best_val, best_q = center, p_hat.copy()
        return DrceSolution(best_val, best_q, "vertex-enumeration")
    return _drce_lp(g, p_hat, xi, vertices, tols)


def drce_with_initial_uncertainty(m, x_hat0, vertices, c, amb: AmbiguitySet,
                                  tols: Tolerances = DEFAULT_TOLS) -> tuple[float, int]:
    """Worst case over both the stopping law and a polytopic initial state.

    ``vertices`` lists the extreme offsets u_i of the initial-state uncertainty
    set; the inner worst-case cost is evaluated at each x_hat0 + u_i and the
    largest one wins (earliest index on ties). Returns (value, winning index).
    """
    a = as_matrix(m)
    x_hat = as_vector(x_hat0)
    cv = as_vector(c)
    if len(vertices) == 0:
        raise ValueError("need at least one uncertainty vertex")
    horizon = amb.nominal.shape[0]
    best_val, best_idx = -np.inf, -1
    for idx, u in enumerate(vertices):
        x0 = x_hat + as_vector(u)
        seq = cost_sequence_strided(a, x0, cv, horizon)
        sol = drce_finite(seq, amb, tols)
        if sol.value > best_val:
            best_val, best_idx = sol.value, idx
    return float(best_val), best_idx
