"""Find the best stopping time over an unbounded horizon without scanning one.

For a strictly stable system the cost g(t) = <c, M^t x0> is a finite sum of
damped oscillations. Once a single witness t0 with g(t0) > 0 is in hand, the
decay rates give a horizon n0 past which |g(t)| can never beat g(t0) again,
so the supremum over ALL t >= 1 reduces to a finite scan. The script prints
the oscillation terms, the witness and cutoff, and the exact optimum for a
rotation-dominated system, then repeats the exercise for a robust geometric
stopping law.

    $ python3 demos/long_run.py --angle 30 --modulus 0.9
"""
import argparse
import math

import numpy as np

from stopcost import decompose, eval_g, find_n0, find_t0, geometric_drce, rce_infinite


def rotation_system(modulus, angle_deg):
    theta = math.radians(angle_deg)
    m = modulus * np.array([[math.cos(theta), -math.sin(theta)],
                            [math.sin(theta), math.cos(theta)]])
    return m, np.array([1.0, 0.0]), np.array([1.0, 0.0])


def main():
    parser = argparse.ArgumentParser(
        description="exact supremum of a damped oscillating cost sequence")
    parser.add_argument("--modulus", type=float, default=0.9,
                        help="spectral radius of the rotation block")
    parser.add_argument("--angle", type=float, default=30.0,
                        help="rotation angle per step, in degrees")
    args = parser.parse_args()

    m, x0, c = rotation_system(args.modulus, args.angle)
    s = decompose(m, c, x0)

    print("oscillation terms of g(t):")
    for term in s.complex_terms:
        frac = "irrational" if term.theta_frac is None else \
            f"{term.theta_frac[0]}/{term.theta_frac[1]} deg"
        print(f"  amplitude {term.amplitude:.4f}, modulus {term.magnitude:.4f}, "
              f"step angle {term.theta_deg:.4f} deg ({frac}), "
              f"phase {term.eta_deg:.4f} deg")
    for term in s.real_terms:
        print(f"  weight {term.weight:+.4f} at rate {term.rate:+.4f}")

    cut = find_t0(s)
    if cut.t0 is None:
        print("\nno positive value exists: supremum is 0 at infinity")
        return
    g_t0 = eval_g(s, cut.t0)
    n0 = cut.n0 if cut.n0 is not None else find_n0(s, g_t0)
    print(f"\nwitness  t0 = {cut.t0} with g(t0) = {g_t0:.6f}  [{cut.case_tag}]")
    print(f"cutoff   n0 = {n0}: beyond this, |g(t)| < g(t0) always")

    res = rce_infinite(m, c, x0)
    print(f"optimum  t* = {res.t_star} with supremum {res.value:.6f}")

    print("\nrobust geometric stopping law around rho_hat = 0.3:")
    print(f"{'radius':>8}  {'worst rho':>10}  {'robust cost':>12}  {'trunc. bound':>13}")
    for xi in (0.0, 0.1, 0.5, 1.0, 2.0):
        rho_star, value, bound = geometric_drce(s, 0.3, xi, 1e-9)
        print(f"{xi:>8.2f}  {rho_star:>10.6f}  {value:>12.6f}  {bound:>13.2e}")


if __name__ == "__main__":
    main()
