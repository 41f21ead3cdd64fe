"""Worst-case stopping analysis over an unbounded horizon.

For a stable system the cost trajectory g(t) = <c, M^t x0> expands, through the
real Jordan form, into a finite sum of damped oscillations and damped
geometric terms:

    g(t) = sum_i d_i r_i^t cos(t theta_i + eta_i) + sum_j w_j lambda_j^t

with every magnitude below 1. The supremum of g over t in {1, 2, ...} is then
either attained at some finite t, or approached at infinity with value 0. The
functions here locate a witness t0 with g(t0) > 0 when one exists, bound the
horizon n0 beyond which |g| stays under g(t0), and reduce the search to a
finite scan. Angles are kept in degrees throughout this module's public types.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .matrix_core import as_matrix, as_vector, real_jordan, spectral_radius


@dataclass(frozen=True)
class ComplexTerm:
    amplitude: float          # d >= 0
    magnitude: float          # r in (0, 1)
    theta_deg: float          # rotation per step, degrees in (0, 180)
    eta_deg: float            # phase, degrees in [0, 360)
    theta_frac: tuple[int, int] | None = None   # exact a/b when theta is rational


@dataclass(frozen=True)
class RealTerm:
    weight: float             # w, any sign
    rate: float               # lambda, |lambda| in (0, 1)


@dataclass(frozen=True)
class OscillatorySum:
    complex_terms: tuple[ComplexTerm, ...]
    real_terms: tuple[RealTerm, ...]

    def __post_init__(self):
        cmags = [t.magnitude for t in self.complex_terms]
        rmags = [abs(t.rate) for t in self.real_terms]
        if any(m >= 1.0 for m in cmags + rmags):
            raise ValueError("all magnitudes must be strictly below 1")
        if any(b <= a for a, b in zip(cmags, cmags[1:])):
            raise ValueError("complex terms must be ordered by ascending magnitude")
        if any(b <= a for a, b in zip(rmags, rmags[1:])):
            raise ValueError("real terms must be ordered by ascending magnitude")

    @property
    def amplitude_total(self) -> float:
        return sum(t.amplitude for t in self.complex_terms) + \
               sum(abs(t.weight) for t in self.real_terms)

    @property
    def top_magnitude(self) -> float:
        mags = [t.magnitude for t in self.complex_terms] + \
               [abs(t.rate) for t in self.real_terms]
        return max(mags) if mags else 0.0

    @property
    def is_empty(self) -> bool:
        return not self.complex_terms and not self.real_terms


@dataclass(frozen=True)
class CutoffResult:
    t0: int | None
    n0: int | None
    case_tag: str


@dataclass(frozen=True)
class RceInfResult:
    kind: str                 # "attained" | "supremum-at-infinity"
    t_star: int | None
    value: float


def _rationalize(theta: float, tols: Tolerances) -> tuple[int, int] | None:
    frac = Fraction(theta).limit_denominator(tols.rational_cap)
    if frac <= 0:
        return None
    if abs(float(frac) - theta) <= tols.rational_err:
        return int(frac.numerator), int(frac.denominator)
    return None


def decompose(m, c, x, tols: Tolerances = DEFAULT_TOLS) -> OscillatorySum:
    """Expand <c, M^t x> into damped oscillations via the real Jordan form."""
    a = as_matrix(m)
    cv = as_vector(c)
    xv = as_vector(x)
    if a.shape[0] != a.shape[1] or cv.shape[0] != a.shape[0] or xv.shape[0] != a.shape[0]:
        raise ValueError("dimension mismatch between matrix, cost, and state")
    if spectral_radius(a) >= 1.0:
        raise ValueError("spectral radius must be strictly below 1")
    form = real_jordan(a, tols)
    sigma = form.p_matrix.T @ cv
    tau = form.p_inverse @ xv

    raw_complex = []
    for i, (r, theta) in enumerate(form.complex_blocks):
        s1, s2 = sigma[2 * i], sigma[2 * i + 1]
        t1, t2 = tau[2 * i], tau[2 * i + 1]
        u = t1 * s1 + t2 * s2
        v = t2 * s1 - t1 * s2
        d = float(np.hypot(u, v))
        eta = float(np.degrees(np.arctan2(v, u)) % 360.0)
        raw_complex.append((d, r, theta, eta))
    off = 2 * len(form.complex_blocks)
    raw_real = [(float(sigma[off + j] * tau[off + j]), lam)
                for j, lam in enumerate(form.real_eigs)]

    peak = max([d for d, *_ in raw_complex] + [abs(w) for w, _ in raw_real] + [0.0])
    floor = 1e-14 * max(1.0, peak)
    complex_terms = tuple(
        ComplexTerm(d, r, theta, eta, _rationalize(theta, tols))
        for d, r, theta, eta in raw_complex
        if d > floor and r > tols.entry_clamp
    )
    real_terms = tuple(
        RealTerm(w, lam) for w, lam in raw_real
        if abs(w) > floor and abs(lam) > tols.entry_clamp
    )
    return OscillatorySum(complex_terms, real_terms)


def _eval_array(s: OscillatorySum, ts: np.ndarray) -> np.ndarray:
    out = np.zeros(ts.shape[0])
    tf = ts.astype(float)
    for term in s.complex_terms:
        ang = np.mod(tf * term.theta_deg + term.eta_deg, 360.0)
        out += term.amplitude * term.magnitude ** tf * np.cos(np.deg2rad(ang))
    for term in s.real_terms:
        out += term.weight * np.sign(term.rate) ** ts * np.abs(term.rate) ** tf
    return out


def eval_g(s: OscillatorySum, t: int) -> float:
    """Evaluate the sum at integer t >= 1."""
    if not isinstance(t, (int, np.integer)) or t < 1:
        raise ValueError(f"t must be a positive integer, got {t!r}")
    return float(_eval_array(s, np.array([int(t)], dtype=np.int64))[0])


def _decay_cap(s: OscillatorySum, tols: Tolerances) -> int:
    # beyond this t the envelope is under the decay floor: scans stop here
    total = s.amplitude_total
    zeta = s.top_magnitude
    if total <= 0.0 or zeta <= 0.0:
        return 1
    return max(1, math.ceil(math.log(tols.decay_floor / total) / math.log(zeta)))


def _scan_first_positive(s: OscillatorySum, hi: int, floor: float) -> int | None:
    t = 1
    while t <= hi:
        chunk = min(hi, t + 65535)
        ts = np.arange(t, chunk + 1, dtype=np.int64)
        vals = _eval_array(s, ts)
        hits = np.flatnonzero(vals > floor)
        if hits.size:
            return int(ts[hits[0]])
        t = chunk + 1
    return None


def bezout_steps(a: int, b: int) -> tuple[int, int, int]:
    """For a rotation of a/b degrees per step: returns (n, l, g) with
    a*n + 360*b*l = g = gcd(360, a) and n != 0."""
    if not isinstance(a, (int, np.integer)) or not isinstance(b, (int, np.integer)):
        raise ValueError("a and b must be integers")
    if a <= 0 or b <= 0 or a >= 360 * b:
        raise ValueError("need 0 < a/b < 360")
    if math.gcd(a, b) != 1:
        raise ValueError("a/b must be in lowest terms")
    g = math.gcd(360, a)
    aa, mm = a // g, (360 * b) // g
    old_r, r = aa, mm
    old_s, sc = 1, 0
    old_t, tc = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, sc = sc, old_s - q * sc
        old_t, tc = tc, old_t - q * tc
    n, l = old_s, old_t          # n*aa + l*mm = 1
    if n == 0:
        raise RuntimeError("degenerate angle: no nonzero step coefficient exists")
    return n, l, g


def find_t0(s: OscillatorySum, tols: Tolerances = DEFAULT_TOLS) -> CutoffResult:
    """Locate a t0 with g(t0) > 0, or certify none is reachable.

    Dominant real term: closed-form thresholds split on the signs of the
    dominant weight and rate; in the negative-weight/positive-rate case g is
    eventually negative, so a bounded window is scanned for a positive maximum
    and n0 is the window edge. Dominant oscillation: a number-theoretic bound
    on when the dominant cosine clears the residual terms, then a scan for the
    first positive value. All scans are capped at the horizon where the whole
    sum decays below the floor.
    """
    if s.is_empty:
        raise ValueError("empty oscillatory sum")
    pos_floor = tols.positive_floor * max(1.0, s.amplitude_total)
    cap = _decay_cap(s, tols)

    r_q = s.complex_terms[-1].magnitude if s.complex_terms else None
    lam_p = s.real_terms[-1].rate if s.real_terms else None
    if r_q is not None and lam_p is not None and abs(r_q - abs(lam_p)) < 1e-12:
        raise ValueError("dominant magnitude tie between oscillation and real term")

    real_dominant = lam_p is not None and (r_q is None or abs(lam_p) > r_q)
    if real_dominant:
        return _find_t0_real(s, pos_floor, cap)
    return _find_t0_complex(s, pos_floor, cap, tols)


def _advance_positive(s, t0, step, cap, pos_floor):
    t = t0
    while t <= cap:
        if eval_g(s, t) > pos_floor:
            return t
        t += step
    return None


def _find_t0_real(s: OscillatorySum, pos_floor: float, cap: int) -> CutoffResult:
    w_p, lam_p = s.real_terms[-1].weight, s.real_terms[-1].rate
    other_mags = [t.magnitude for t in s.complex_terms] + \
                 [abs(t.rate) for t in s.real_terms[:-1]]
    beta = sum(t.amplitude for t in s.complex_terms) + \
           sum(abs(t.weight) for t in s.real_terms[:-1])
    tag = f"real-{'pos' if w_p > 0 else 'neg'}-{'pos' if lam_p > 0 else 'neg'}"

    if beta == 0.0:                       # single surviving term
        if w_p > 0:
            t0, step = (1, 1) if lam_p > 0 else (2, 2)
        elif lam_p < 0:
            t0, step = 1, 2
        else:
            return CutoffResult(None, None, tag)
        t0 = _advance_positive(s, t0, step, cap, pos_floor)
        return CutoffResult(t0, None, tag)

    eps = max(other_mags) / abs(lam_p)    # < 1 by magnitude ordering
    log_eps = math.log(eps)

    def log_ratio(x: float) -> float:
        return math.log(x) / log_eps

    if w_p > 0 and lam_p > 0:
        t0 = 1 + max(math.ceil(log_ratio(w_p / beta)), 1)
        t0 = _advance_positive(s, t0, 1, cap, pos_floor)
    elif w_p > 0 and lam_p < 0:
        t0 = 2 + 2 * max(math.ceil(0.5 * log_ratio(w_p / beta)), 1)
        t0 = _advance_positive(s, t0, 2, cap, pos_floor)
    elif w_p < 0 and lam_p < 0:
        t0 = 2 * max(math.ceil(0.5 * log_ratio(-w_p / beta)), 1) + 1
        t0 = _advance_positive(s, t0, 2, cap, pos_floor)
    else:                                 # w_p < 0, lam_p > 0: eventually negative
        edge = math.floor(log_ratio(-w_p / beta)) if -w_p / beta < 1.0 else 0
        if edge < 1:
            return CutoffResult(None, None, tag)
        ts = np.arange(1, min(edge, cap) + 1, dtype=np.int64)
        vals = _eval_array(s, ts)
        best = int(np.argmax(vals))
        if vals[best] > pos_floor:
            return CutoffResult(int(ts[best]), edge, tag)
        return CutoffResult(None, None, tag)
    if t0 is None:
        # The guaranteed-domination witness decayed below the floor; a
        # transient from the subdominant terms can still poke positive early.
        t0 = _scan_first_positive(s, cap, pos_floor)
    return CutoffResult(t0, None, tag)


def _find_t0_complex(s: OscillatorySum, pos_floor: float, cap: int,
                     tols: Tolerances) -> CutoffResult:
    term = s.complex_terms[-1]
    d, r, eta = term.amplitude, term.magnitude, term.eta_deg
    gamma = sum(t.amplitude for t in s.complex_terms[:-1]) + \
            sum(abs(t.weight) for t in s.real_terms)

    if term.theta_frac is None:           # irrational angle: bounded heuristic scan
        t0 = _scan_first_positive(s, cap, pos_floor)
        return CutoffResult(t0, None, "complex")

    a, b = term.theta_frac
    g = math.gcd(360, a)

    if gamma == 0.0:
        # pure rotation: the sign pattern of cos(t theta + eta) has period 360b/g
        period = (360 * b) // g
        t0 = _scan_first_positive(s, min(period, cap), pos_floor)
        return CutoffResult(t0, None, "complex")

    n, _, _ = bezout_steps(a, b)
    c_int = 135 + math.floor(eta) - (90 if d > 0 else -90)
    # integer p in (0, 90b) with g | (p - c*b); smallest such p, else fall back
    rem = (c_int * b) % g
    p = rem if rem > 0 else g
    if p >= 90 * b:
        t0 = _scan_first_positive(s, cap, pos_floor)
        return CutoffResult(t0, None, "complex")

    big_c = max([t.magnitude for t in s.complex_terms[:-1]] +
                [abs(t.rate) for t in s.real_terms]) / r
    s0 = 1 + max(0, math.ceil(math.copysign(1, n) * (c_int * b - p) / 360))
    log_term = math.log(abs(d) / (2.0 * gamma)) / math.log(big_c)
    dd = (g * log_term - n * (p - c_int * b)) / (360.0 * b * abs(n)) - s0
    f = max(1, math.ceil(dd))
    bound = (n * (p - b * c_int)) // g + abs(n) * (s0 + f) * ((360 * b) // g)
    bound = max(int(bound), 1)
    t0 = _scan_first_positive(s, min(bound, cap), pos_floor)
    return CutoffResult(t0, None, "complex")


def find_n0(s: OscillatorySum, g_t0: float) -> int:
    """Horizon beyond which |g(t)| stays below g(t0): one past the log ceiling."""
    if g_t0 <= 0.0:
        raise ValueError("g(t0) must be positive")
    total = s.amplitude_total
    zeta = s.top_magnitude
    if total <= 0.0 or zeta <= 0.0:
        return 1
    ratio = min(g_t0 / total, 1.0)
    n0 = math.ceil(math.log(ratio) / math.log(zeta)) + 1
    return max(n0, 1)


def rce_infinite(m, c, x, tols: Tolerances = DEFAULT_TOLS) -> RceInfResult:
    """Supremum of <c, M^t x> over all positive integer stopping times."""
    s = decompose(m, c, x, tols)
    if s.is_empty:
        return RceInfResult("supremum-at-infinity", None, 0.0)
    cut = find_t0(s, tols)
    if cut.t0 is None:
        return RceInfResult("supremum-at-infinity", None, 0.0)
    n0 = cut.n0 if cut.n0 is not None else find_n0(s, eval_g(s, cut.t0))
    best_t, best_val = cut.t0, -math.inf
    t = 1
    while t <= n0:
        hi = min(n0, t + 65535)
        ts = np.arange(t, hi + 1, dtype=np.int64)
        vals = _eval_array(s, ts)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_t, best_val = int(ts[i]), float(vals[i])
        t = hi + 1
    return RceInfResult("attained", best_t, best_val)


def rce_infinite_2d(d: float, kappa: float, r: float, theta: float,
                    alpha: float, gamma: float) -> RceInfResult:
    """Closed-form search for the planar pure-oscillation case (radians here).

    g(t) = d r^t cos(t theta + alpha) with theta in (0, pi); gamma is the phase
    of ln r + i theta (= kappa e^{i gamma}). The first positive point and a
    stationary-point envelope give an exact finite search window.
    """
    if not (0.0 < theta < math.pi):
        raise ValueError("theta must lie in (0, pi) radians")
    if not (0.0 < r < 1.0):
        raise ValueError("r must lie in (0, 1)")
    if d <= 0.0:
        raise ValueError("amplitude d must be positive")
    if abs(kappa * math.cos(gamma) - math.log(r)) > 1e-6 * max(1.0, kappa) or \
       abs(kappa * math.sin(gamma) - theta) > 1e-6 * max(1.0, kappa):
        raise ValueError("(kappa, gamma) do not match (r, theta)")

    def g(t: float) -> float:
        return d * r ** t * math.cos(t * theta + alpha)

    two_pi = 2.0 * math.pi
    t0 = math.ceil((-math.pi / 2.0 - alpha + two_pi * math.ceil(alpha / two_pi + 0.25)) / theta)
    t0 = max(int(t0), 1)
    # rational-multiple-of-pi inputs can land exactly on a cosine zero; step to
    # the next positive value (each positive stretch is longer than 1)
    guard = int(math.ceil(two_pi / theta)) + 2
    for _ in range(guard):
        if g(t0) > 0.0:
            break
        t0 += 1
    else:
        raise RuntimeError("failed to locate a positive value; inputs inconsistent")

    sin_g = abs(math.sin(gamma))
    m_star = 1 + math.ceil((theta * (math.log(g(t0) / (sin_g * d)) / math.log(r))
                            + alpha + gamma - math.pi / 2.0) / math.pi)
    x_edge = (math.pi / 2.0 - alpha - gamma + m_star * math.pi) / theta
    hi = max(int(math.floor(x_edge)), t0)
    ts = np.arange(1, hi + 1)
    vals = d * r ** ts.astype(float) * np.cos(ts * theta + alpha)
    best = int(np.argmax(vals))
    return RceInfResult("attained", int(ts[best]), float(vals[best]))


def geometric_drce(s: OscillatorySum, rho_hat: float, xi: float, eps: float,
                   tols: Tolerances = DEFAULT_TOLS) -> tuple[float, float, float]:
    """Worst geometric stopping law within Wasserstein radius xi of Geom(rho_hat).

    The Wasserstein-1 distance between geometric laws is |1/rho - 1/rho_hat|,
    so the feasible success rates form an interval; the truncated objective
    sum_{t<=n0} g(t) (1-rho)^{t-1} rho (truncation error below eps (1-rho)^n0)
    is maximized by projected gradient ascent with 8 evenly spaced restarts.
    Returns (rho_star, value, truncation error bound).
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if not (0.0 < rho_hat < 1.0):
        raise ValueError("rho_hat must lie in (0, 1)")
    if xi < 0.0:
        raise ValueError("xi must be nonnegative")

    lo = rho_hat / (1.0 + rho_hat * xi)
    hi = 1.0 if rho_hat * xi >= 1.0 else min(1.0, rho_hat / (1.0 - rho_hat * xi))
    lo = min(max(lo, 1e-12), 1.0 - 1e-12)
    if hi < lo:
        raise ValueError("empty feasible interval")

    total = s.amplitude_total
    zeta = s.top_magnitude
    if total <= 0.0 or zeta <= 0.0:
        n0 = 1
    else:
        n0 = max(1, math.ceil(math.log(min(eps / total, 1.0)) / math.log(zeta)) + 1)

    ts = np.arange(1, n0 + 1, dtype=np.int64)
    g_vals = _eval_array(s, ts)
    tf = ts.astype(float)

    def objective(rho: float) -> float:
        return float(np.sum(g_vals * (1.0 - rho) ** (tf - 1.0) * rho))

    def gradient(rho: float) -> float:
        base = (1.0 - rho) ** np.maximum(tf - 2.0, 0.0)
        dterm = np.where(ts == 1, 1.0, base * ((1.0 - rho) - (tf - 1.0) * rho))
        return float(np.sum(g_vals * dterm))

    width = hi - lo
    step = 0.1 * width
    best_rho, best_val = lo, objective(lo)
    for start in np.linspace(lo, hi, 8):
        rho = float(start)
        for _ in range(500):
            val = objective(rho)
            if val > best_val + 1e-15 or (abs(val - best_val) <= 1e-15 and rho < best_rho):
                best_rho, best_val = rho, val
            if step == 0.0:
                break
            rho = float(np.clip(rho + step * gradient(rho), lo, hi))
        val = objective(rho)
        if val > best_val + 1e-15 or (abs(val - best_val) <= 1e-15 and rho < best_rho):
            best_rho, best_val = rho, val
    return best_rho, best_val, float(eps * (1.0 - best_rho) ** n0)


def adversarial_instance(k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """A 2x2 system whose cost stays negative through t = k yet turns positive later.

    Returns (M, x0, c): M is half a rotation by 2/(4k+1) radians, x0 sits at
    angle alpha_k = sum_{i<=k} 4/((4i-1)(4i-3)), and c = (1, 0), giving
    <c, M^t x0> = 2^{-t} cos(alpha_k + t theta_k).
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError("k must be a positive integer")
    alpha = sum(4.0 / ((4 * i - 1) * (4 * i - 3)) for i in range(1, k + 1))
    theta = 2.0 / (4 * k + 1)
    rot = np.array([[math.cos(theta), -math.sin(theta)],
                    [math.sin(theta), math.cos(theta)]])
    m = 0.5 * rot
    x0 = np.array([math.cos(alpha), math.sin(alpha)])
    c = np.array([1.0, 0.0])
    return m, x0, c


def dircyc_instance(adjacency) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Reduce directed reachability to sign queries on a cost trajectory.

    For a 0/1 adjacency matrix A, with r = 1 + max column sum, M = A/r,
    x0 = e_n, c = -e_1 and threshold 0: <c, M^t x0> >= 0 exactly when no
    directed walk of length t runs from node 1 to node n.
    """
    a = as_matrix(adjacency)
    if a.shape[0] != a.shape[1]:
        raise ValueError("adjacency matrix must be square")
    if not np.all((np.abs(a) < 1e-12) | (np.abs(a - 1.0) < 1e-12)):
        raise ValueError("adjacency entries must be 0 or 1")
    a = np.round(a)
    n = a.shape[0]
    r = 1.0 + a.sum(axis=0).max()
    m = a / r
    x0 = np.zeros(n)
    x0[n - 1] = 1.0
    c = np.zeros(n)
    c[0] = -1.0
    return m, x0, c, 0.0
