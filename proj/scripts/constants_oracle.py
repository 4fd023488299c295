#!/usr/bin/env python3
"""Recompute the model constants in extended precision.

Independent cross-check for the values hard-coded in the C++ tests: every
closed-form constant is evaluated here with mpmath at 50 significant digits,
straight from its defining formula.  Run with

    python3 scripts/constants_oracle.py [alpha N p]

and compare against the library (tests/test_params.cpp freezes the output
for (3, 2, 1/3)).
"""

import json
import sys

import mpmath as mp

mp.mp.dps = 50


def constants(alpha, dim, p):
    alpha = mp.mpf(alpha)
    p = mp.mpf(p)
    N = mp.mpf(dim)

    xi = (alpha * p) ** (-1 / alpha)
    c_star = ((2 * alpha / (alpha + 1)) * (N - 2 + 2 / (alpha + 1))) ** (
        -1 / (alpha + 1)
    )
    cap_a = N - 2 + 4 / (alpha + 1)
    cap_c = p / c_star
    g_prime_1 = 2 * (N - 2 + 2 / (alpha + 1))
    beta = 2 * alpha / (alpha + 1)
    spacing_limit = mp.pi * (alpha * p) ** (-(1 + alpha) / (2 * alpha))

    disc = cap_a**2 - 4 * g_prime_1
    sq = mp.sqrt(mp.mpc(disc))
    a1 = (cap_a + sq) / 2
    a2 = (cap_a - sq) / 2

    kappa = -cap_c / (beta**2 + cap_a * beta + g_prime_1)
    lower_const = ((alpha + 1) / (4 * N * alpha)) ** (1 / (alpha + 1))

    def fmt(x):
        return mp.nstr(x, 30)

    return {
        "alpha": fmt(alpha),
        "dim": dim,
        "p": fmt(p),
        "xi": fmt(xi),
        "c_star": fmt(c_star),
        "cap_a": fmt(cap_a),
        "cap_c": fmt(cap_c),
        "g_prime_1": fmt(g_prime_1),
        "beta": fmt(beta),
        "spacing_limit": fmt(spacing_limit),
        "discriminant": fmt(disc),
        "a1_re": fmt(mp.re(a1)),
        "a1_im": fmt(mp.im(a1)),
        "a2_re": fmt(mp.re(a2)),
        "a2_im": fmt(mp.im(a2)),
        "kappa": fmt(kappa),
        "rupture_lower_const": fmt(lower_const),
        # spot values of the scalar functions
        "f(2)": fmt(p - mp.mpf(2) ** (-alpha) / alpha),
        "F(1)": fmt(1 / (alpha * (alpha - 1)) + p),
        "F(2)": fmt(mp.mpf(2) ** (1 - alpha) / (alpha * (alpha - 1)) + 2 * p),
        "g(2)": fmt(
            (2 / (alpha + 1))
            * (N - 2 + 2 / (alpha + 1))
            * (2 - mp.mpf(2) ** (-alpha))
        ),
        "G(1)": fmt(
            (2 / (alpha + 1))
            * (N - 2 + 2 / (alpha + 1))
            * (mp.mpf(1) / 2 + mp.mpf(1) / (alpha - 1))
        ),
        "r1_bound(eta=2)": fmt(
            mp.sqrt(2 * N * alpha * (2 - xi) / (xi**-alpha - mp.mpf(2) ** -alpha))
        ),
    }


if __name__ == "__main__":
    if len(sys.argv) == 4:
        a, n, pr = sys.argv[1], int(sys.argv[2]), sys.argv[3]
    else:
        a, n, pr = "3", 2, mp.mpf(1) / 3
    print(json.dumps(constants(a, n, pr), indent=2))
