import math

import numpy as np
import pytest

from stopcost.infinite_horizon import (
    ComplexTerm,
    OscillatorySum,
    RealTerm,
    adversarial_instance,
    bezout_steps,
    decompose,
    dircyc_instance,
    eval_g,
    find_n0,
    find_t0,
    geometric_drce,
    rce_infinite,
    rce_infinite_2d,
)
from stopcost.matrix_core import mat_pow

from helpers import random_stable

DIAG = np.diag([0.9, -0.5])
ONES = np.array([1.0, 1.0])
ROT90 = 0.5 * np.array([[0.0, -1.0], [1.0, 0.0]])
E1 = np.array([1.0, 0.0])


def brute_values(m, c, x, horizon):
    m, c, x = np.asarray(m, float), np.asarray(c, float), np.asarray(x, float)
    out = np.empty(horizon)
    state = x.copy()
    for t in range(horizon):
        state = m @ state
        out[t] = c @ state
    return out


# -------------------------------------------------------------- decompose ---

def test_decompose_diagonal_fixture():
    s = decompose(DIAG, ONES, ONES)
    assert s.complex_terms == ()
    assert [(t.weight, t.rate) for t in s.real_terms] == [
        pytest.approx((1.0, -0.5)), pytest.approx((1.0, 0.9))]


def test_decompose_rotation_fixture():
    s = decompose(ROT90, E1, E1)
    assert s.real_terms == ()
    (term,) = s.complex_terms
    assert term.amplitude == pytest.approx(1.0, abs=1e-10)
    assert term.magnitude == pytest.approx(0.5, abs=1e-12)
    assert term.theta_deg == pytest.approx(90.0, abs=1e-9)
    assert term.eta_deg % 360.0 == pytest.approx(0.0, abs=1e-7)
    assert term.theta_frac == (90, 1)


def test_decompose_reconstructs_cost_trajectory():
    """The term sum must reproduce <c, M^t x> exactly for generic systems."""
    rng = np.random.default_rng(307)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        m = random_stable(rng, n)
        c = rng.standard_normal(n)
        x = rng.standard_normal(n)
        s = decompose(m, c, x)
        direct = brute_values(m, c, x, 50)
        scale = max(1.0, np.abs(direct).max())
        for t in (1, 2, 3, 5, 10, 25, 50):
            assert abs(eval_g(s, t) - direct[t - 1]) <= 1e-7 * scale


def test_decompose_rejects_unstable():
    with pytest.raises(ValueError):
        decompose(np.eye(2), ONES, ONES)
    with pytest.raises(ValueError):
        decompose(np.array([[1.1]]), [1.0], [1.0])


def test_decompose_drops_negligible_terms():
    # x orthogonal to the slow eigenvector leaves only the fast term
    s = decompose(DIAG, ONES, np.array([0.0, 1.0]))
    assert [(t.weight, t.rate) for t in s.real_terms] == [pytest.approx((1.0, -0.5))]


def test_eval_g_validates_t():
    s = decompose(DIAG, ONES, ONES)
    with pytest.raises(ValueError):
        eval_g(s, 0)
    with pytest.raises(ValueError):
        eval_g(s, -3)


def test_oscillatory_sum_validation():
    with pytest.raises(ValueError):
        OscillatorySum((), (RealTerm(1.0, 1.0),))            # magnitude not < 1
    with pytest.raises(ValueError):
        OscillatorySum((), (RealTerm(1.0, 0.9), RealTerm(1.0, 0.3)))   # misordered
    with pytest.raises(ValueError):
        OscillatorySum((ComplexTerm(1.0, 0.8, 30.0, 0.0),
                        ComplexTerm(1.0, 0.4, 10.0, 0.0)), ())


# ----------------------------------------------------------- bezout_steps ---

def test_bezout_identity_random():
    rng = np.random.default_rng(311)
    found = 0
    while found < 40:
        b = int(rng.integers(1, 50))
        a = int(rng.integers(1, 360 * b))
        if math.gcd(a, b) != 1:
            continue
        n, l, g = bezout_steps(a, b)
        assert a * n + 360 * b * l == g == math.gcd(360, a)
        assert n != 0
        found += 1


def test_bezout_rejects_bad_input():
    with pytest.raises(ValueError):
        bezout_steps(2, 4)          # not in lowest terms
    with pytest.raises(ValueError):
        bezout_steps(360, 1)        # angle not below a full turn
    with pytest.raises(ValueError):
        bezout_steps(0, 1)


# ---------------------------------------------------------------- find_t0 ---

def test_find_t0_real_dominant_positive():
    s = decompose(DIAG, ONES, ONES)
    cut = find_t0(s)
    assert cut.case_tag == "real-pos-pos"
    assert cut.t0 == 2
    assert eval_g(s, cut.t0) > 0.0


def test_find_t0_rotation_needs_full_turn():
    # cos(90 t) is zero/negative until t=4; exact zeros must not count as hits
    s = decompose(ROT90, E1, E1)
    cut = find_t0(s)
    assert cut.case_tag == "complex"
    assert cut.t0 == 4


def test_find_t0_negative_weight_positive_rate_no_witness():
    s = OscillatorySum((), (RealTerm(-1.0, 0.9),))
    cut = find_t0(s)
    assert cut.case_tag == "real-neg-pos"
    assert cut.t0 is None


def test_find_t0_negative_weight_positive_rate_with_window():
    # small fast positive term beats the slow negative one only early on
    s = OscillatorySum((), (RealTerm(0.5, 0.5), RealTerm(-0.1, 0.9)))
    cut = find_t0(s)
    assert cut.case_tag == "real-neg-pos"
    assert cut.t0 == 1
    assert cut.n0 is not None
    # beyond the window the sum must stay nonpositive
    for t in range(cut.n0 + 1, cut.n0 + 50):
        assert eval_g(s, t) <= 1e-12


def test_find_t0_alternating_rate_parity():
    neg_neg = OscillatorySum((), (RealTerm(-1.0, -0.8),))
    cut = find_t0(neg_neg)
    assert cut.case_tag == "real-neg-neg"
    assert cut.t0 == 1 and eval_g(neg_neg, 1) > 0.0

    pos_neg = OscillatorySum((), (RealTerm(1.0, -0.8),))
    cut = find_t0(pos_neg)
    assert cut.case_tag == "real-pos-neg"
    assert cut.t0 == 2 and eval_g(pos_neg, 2) > 0.0


def test_find_t0_dominant_tie_rejected():
    s = OscillatorySum((ComplexTerm(1.0, 0.7, 45.0, 0.0, (45, 1)),),
                       (RealTerm(1.0, 0.7),))
    with pytest.raises(ValueError):
        find_t0(s)


def test_find_t0_empty_sum_rejected():
    with pytest.raises(ValueError):
        find_t0(OscillatorySum((), ()))


def test_find_t0_always_returns_positive_witness():
    rng = np.random.default_rng(313)
    for _ in range(40):
        n = int(rng.integers(1, 6))
        m = random_stable(rng, n)
        c, x = rng.standard_normal(n), rng.standard_normal(n)
        s = decompose(m, c, x)
        if s.is_empty:
            continue
        cut = find_t0(s)
        if cut.t0 is not None:
            floor = 1e-12 * max(1.0, s.amplitude_total)
            assert eval_g(s, cut.t0) > floor


# ---------------------------------------------------------------- find_n0 ---

def test_find_n0_diagonal_fixture():
    s = decompose(DIAG, ONES, ONES)
    assert find_n0(s, eval_g(s, 2)) == 8


def test_find_n0_bounds_later_values():
    rng = np.random.default_rng(317)
    for _ in range(30):
        n = int(rng.integers(1, 6))
        m = random_stable(rng, n)
        c, x = rng.standard_normal(n), rng.standard_normal(n)
        s = decompose(m, c, x)
        if s.is_empty:
            continue
        cut = find_t0(s)
        if cut.t0 is None or cut.n0 is not None:
            continue
        g_t0 = eval_g(s, cut.t0)
        n0 = find_n0(s, g_t0)
        assert n0 >= cut.t0
        for t in range(n0 + 1, n0 + 200, 7):
            assert abs(eval_g(s, t)) < g_t0


def test_find_n0_requires_positive_value():
    s = decompose(DIAG, ONES, ONES)
    with pytest.raises(ValueError):
        find_n0(s, 0.0)


# ------------------------------------------------------------ rce_infinite ---

def test_rce_infinite_diagonal_fixture():
    res = rce_infinite(DIAG, ONES, ONES)
    assert res.kind == "attained"
    assert res.t_star == 2
    assert res.value == pytest.approx(1.06, abs=1e-12)


def test_rce_infinite_rotation_fixture():
    res = rce_infinite(ROT90, E1, E1)
    assert (res.kind, res.t_star) == ("attained", 4)
    assert res.value == pytest.approx(0.0625, abs=1e-12)


def test_rce_infinite_supremum_at_infinity():
    # strictly negative trajectory approaching zero from below
    m = np.array([[0.9]])
    res = rce_infinite(m, [-1.0], [1.0])
    assert res.kind == "supremum-at-infinity"
    assert res.t_star is None
    assert res.value == 0.0


def test_rce_infinite_matches_brute_force():
    """Exact agreement with a long direct scan on random stable systems."""
    rng = np.random.default_rng(331)
    attained = 0
    for _ in range(50):
        n = int(rng.integers(1, 7))
        m = random_stable(rng, n)          # spectral radius <= 0.9
        c, x = rng.standard_normal(n), rng.standard_normal(n)
        res = rce_infinite(m, c, x)
        direct = brute_values(m, c, x, 600)
        scale = max(1.0, np.abs(direct).max())
        if res.kind == "attained":
            best = int(np.argmax(direct))
            assert res.t_star == best + 1
            assert res.value == pytest.approx(direct[best], abs=1e-9 * scale)
            attained += 1
        else:
            assert direct.max() <= 1e-9 * scale
    assert attained >= 20


# --------------------------------------------------------- planar closed form ---

def planar_args(r, theta, alpha, d):
    kappa = math.hypot(math.log(r), theta)
    gamma = math.atan2(theta, math.log(r))
    return d, kappa, r, theta, alpha, gamma


def test_rce_infinite_2d_quarter_turn_fixture():
    res = rce_infinite_2d(*planar_args(0.5, math.pi / 2.0, 0.0, 1.0))
    assert (res.kind, res.t_star) == ("attained", 4)
    assert res.value == pytest.approx(0.0625, abs=1e-12)


def test_rce_infinite_2d_cross_checks_matrix_route():
    rng = np.random.default_rng(337)
    for _ in range(25):
        r = float(0.3 + 0.6 * rng.random())
        theta = float(rng.uniform(0.05, math.pi - 0.05))
        alpha = float(rng.uniform(0.0, 2.0 * math.pi))
        rot = np.array([[math.cos(theta), -math.sin(theta)],
                        [math.sin(theta), math.cos(theta)]])
        m = r * rot
        x = np.array([math.cos(alpha), math.sin(alpha)])
        res_2d = rce_infinite_2d(*planar_args(r, theta, alpha, 1.0))
        direct = brute_values(m, E1, x, 2000)
        best = int(np.argmax(direct))
        assert res_2d.t_star == best + 1
        assert res_2d.value == pytest.approx(direct[best], abs=1e-9)


def test_rce_infinite_2d_validation():
    good = planar_args(0.5, 1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        rce_infinite_2d(1.0, good[1], 0.5, -1.0, 0.0, good[5])
    with pytest.raises(ValueError):
        rce_infinite_2d(1.0, good[1], 1.5, 1.0, 0.0, good[5])
    with pytest.raises(ValueError):
        rce_infinite_2d(-1.0, good[1], 0.5, 1.0, 0.0, good[5])
    with pytest.raises(ValueError):
        # kappa/gamma inconsistent with (r, theta)
        rce_infinite_2d(1.0, good[1] * 2.0, 0.5, 1.0, 0.0, good[5])


# ------------------------------------------------- constructed hard cases ---

def test_adversarial_instance_k1_parameters():
    m, x, c = adversarial_instance(1)
    theta = 2.0 / 5.0
    np.testing.assert_allclose(
        m, 0.5 * np.array([[math.cos(theta), -math.sin(theta)],
                           [math.sin(theta), math.cos(theta)]]), atol=1e-15)
    alpha = 4.0 / 3.0
    np.testing.assert_allclose(x, [math.cos(alpha), math.sin(alpha)], atol=1e-15)
    np.testing.assert_array_equal(c, [1.0, 0.0])


def test_adversarial_instances_stay_negative_through_k():
    for k in range(1, 9):
        m, x, c = adversarial_instance(k)
        direct = brute_values(m, c, x, 9 * k)
        assert (direct[:k] < 0.0).all(), f"k={k} leaked a positive value early"
        assert direct[9 * k - 1] > 0.0
        first_pos = int(np.argmax(direct > 0.0)) + 1
        assert first_pos > k


def test_adversarial_instance_validation():
    with pytest.raises(ValueError):
        adversarial_instance(0)


def test_dircyc_matches_walk_counts():
    rng = np.random.default_rng(347)
    for _ in range(20):
        n = int(rng.integers(2, 7))
        adj = (rng.random((n, n)) < 0.4).astype(float)
        m, x, c, threshold = dircyc_instance(adj)
        assert threshold == 0.0
        for t in range(1, 12):
            walks = np.linalg.matrix_power(adj, t)[0, n - 1]
            g_t = float(c @ (mat_pow(m, t) @ x))
            if walks > 0:
                assert g_t < threshold
            else:
                assert g_t >= threshold


def test_dircyc_rejects_nonbinary():
    with pytest.raises(ValueError):
        dircyc_instance(np.array([[0.0, 0.5], [1.0, 0.0]]))


# ---------------------------------------------------------- geometric drce ---

def test_geometric_drce_scalar_fixture():
    s = decompose(np.array([[0.5]]), [1.0], [1.0])
    rho_star, value, bound = geometric_drce(s, 0.5, 0.5, 1e-9)
    assert rho_star == pytest.approx(2.0 / 3.0, abs=1e-6)
    assert value == pytest.approx(0.4, abs=1e-6)
    assert 0.0 <= bound <= 1e-9


def test_geometric_drce_zero_radius():
    s = decompose(DIAG, ONES, ONES)
    rho_star, value, _ = geometric_drce(s, 0.62, 0.0, 1e-9)
    assert rho_star == pytest.approx(0.62, abs=1e-12)
    ts = np.arange(1, 200)
    expected = sum(eval_g(s, int(t)) * (1 - 0.62) ** (t - 1) * 0.62 for t in ts)
    assert value == pytest.approx(expected, abs=1e-8)


def test_geometric_drce_matches_grid_search():
    rng = np.random.default_rng(353)
    for _ in range(10):
        n = int(rng.integers(1, 5))
        m = random_stable(rng, n)
        s = decompose(m, rng.standard_normal(n), rng.standard_normal(n))
        if s.is_empty:
            continue
        rho_hat = float(rng.uniform(0.2, 0.8))
        xi = float(rng.uniform(0.0, 1.0))
        eps = 1e-9
        rho_star, value, _ = geometric_drce(s, rho_hat, xi, eps)
        lo = rho_hat / (1.0 + rho_hat * xi)
        hi = 1.0 if rho_hat * xi >= 1.0 else min(1.0, rho_hat / (1.0 - rho_hat * xi))
        assert lo - 1e-12 <= rho_star <= hi + 1e-12
        total = s.amplitude_total
        zeta = s.top_magnitude
        n0 = max(1, math.ceil(math.log(min(eps / total, 1.0)) / math.log(zeta)) + 1)
        ts = np.arange(1, n0 + 1)
        g = np.array([eval_g(s, int(t)) for t in ts])
        grid_best = -np.inf
        for rho in np.linspace(lo, hi, 10_000):
            grid_best = max(grid_best, float(np.sum(g * (1 - rho) ** (ts - 1) * rho)))
        assert value >= grid_best - 1e-6


def test_geometric_drce_validation():
    s = decompose(np.array([[0.5]]), [1.0], [1.0])
    with pytest.raises(ValueError):
        geometric_drce(s, 0.5, 0.5, 0.0)
    with pytest.raises(ValueError):
        geometric_drce(s, 1.5, 0.5, 1e-6)
    with pytest.raises(ValueError):
        geometric_drce(s, 0.5, -0.1, 1e-6)
