#!/usr/bin/env python3
"""High-precision reference constants for the analysis tests.

Evaluates the security-bound formulas independently (mpmath, 50 digits) and
dumps chi-square acceptance thresholds from scipy. Output is frozen at
tests/data/analysis_constants.json.

Regenerate with: python3 constants.py > ../data/analysis_constants.json
"""

import json

import mpmath as mp
from scipy.stats import chi2

mp.mp.dps = 50


def cascade_w(alpha, rho, d):
    b = d * (1 - alpha)
    return sum(b**l for l in range(rho + 1))


def st_product(alpha, rho, d, w):
    return alpha * (1 - alpha) * d * w / rho


def staleness_w(alpha, rho, d):
    total = mp.mpf(1)
    prod = mp.mpf(1)
    for l in range(1, rho + 1):
        prod *= d * (1 - alpha * mp.e ** (-(l - 1)))
        total += prod
    return total


def chernoff_tail(n, d, rho, delta):
    return n * mp.e ** (-(delta**2) * d * rho / 3)


RHO, D = 4, 8
table4_alphas = [mp.mpf(1) / 6, mp.mpf(1) / 4, mp.mpf(1) / 2, mp.mpf(3) / 4, mp.mpf(7) / 8]
table5_alphas = [mp.mpf(1) / 6, mp.mpf(1) / 2, mp.mpf(7) / 8, mp.mpf("0.95")]

out = {
    "table4": [
        {
            "alpha": float(a),
            "w": float(cascade_w(a, RHO, D)),
            "st": float(st_product(a, RHO, D, cascade_w(a, RHO, D))),
        }
        for a in table4_alphas
    ],
    "table5": [
        {
            "alpha": float(a),
            "w_star": float(staleness_w(a, RHO, D)),
            "st_star": float(st_product(a, RHO, D, staleness_w(a, RHO, D))),
        }
        for a in table5_alphas
    ],
    "chernoff_2p24_8_4_1": float(chernoff_tail(2**24, 8, 4, 1)),
    "exp_minus_4": float(mp.e**-4),
    "sqrt_32": float(mp.sqrt(32)),
    "chi2_q999": {
        "255": float(chi2.ppf(0.999, 255)),
        "16383": float(chi2.ppf(0.999, 16383)),
        "65535": float(chi2.ppf(0.999, 65535)),
    },
}

print(json.dumps(out, indent=2, sort_keys=True))
