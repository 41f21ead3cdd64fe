"""Explore the Wasserstein-1 ambiguity ball over stopping-time distributions.

A nominal distribution p_hat over horizons {1..T} is only an estimate, so the
robust cost maximizes the expected cost over every distribution within
Wasserstein distance xi of p_hat. On the line metric that ball is a polytope
whose vertices shift probability between adjacent horizons, which is why the
worst case is either found by enumerating 2(T-1) shifted vertices (when they
all stay nonnegative) or by a small LP. The script prints the ball geometry,
then sweeps the radius to show the robust cost climbing from the plug-in
mixture toward the single worst horizon.

    $ python3 demos/ambiguity_ball.py --horizon 6 --seed 1
"""
import argparse

import numpy as np

from stopcost import (
    AmbiguitySet,
    CostSequence,
    drce_finite,
    unit_ball_vertices,
    w1_distance,
    w_norm,
)


def main():
    parser = argparse.ArgumentParser(
        description="robust cost over a Wasserstein ball of horizon distributions")
    parser.add_argument("--horizon", type=int, default=6)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    t = args.horizon
    rng = np.random.default_rng(args.seed)

    print(f"unit ball vertices for T={t} (directions of one-step mass transfer):")
    for i, v in enumerate(unit_ball_vertices(t)):
        print(f"  v{i:<2} {np.array2string(v, precision=1)}  norm={w_norm(v):.3f}")

    p = rng.random(t) + 0.1
    p /= p.sum()
    q = rng.random(t) + 0.1
    q /= q.sum()
    print(f"\np_hat = {np.array2string(p, precision=3)}")
    print(f"q     = {np.array2string(q, precision=3)}")
    print(f"W1(p_hat, q) = {w1_distance(p, q):.6f}")

    g = np.sort(rng.standard_normal(t))[::-1]      # favor early stopping
    seq = CostSequence(t, g)
    print(f"\ncosts g(t) = {np.array2string(g, precision=3)}")
    print(f"plug-in mixture <p_hat, g> = {float(p @ g):.6f}")
    print(f"single worst horizon cost  = {g.max():.6f}")

    print(f"\n{'radius':>8}  {'robust cost':>12}  {'case':>20}")
    for xi in (0.0, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, float(t)):
        sol = drce_finite(seq, AmbiguitySet(p, xi))
        print(f"{xi:>8.2f}  {sol.value:>12.6f}  {sol.case_used:>20}")
    sol = drce_finite(seq, AmbiguitySet(p, float(t)))
    print(f"\nworst distribution at radius {t}: "
          f"{np.array2string(sol.worst_q, precision=3)}")


if __name__ == "__main__":
    main()
