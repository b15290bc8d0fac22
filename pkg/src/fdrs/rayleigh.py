"""Rayleigh-fading special cases of the outage probabilities.

With every Nakagami shape equal to 1 and a common transmit power
P_S = P_R = p, the end-to-end CDFs collapse to short elementary
expressions in

    a   = x (1/pi_sr + 1/pi_rd)
    b   = x pi_rr / pi_sr
    c_k = x k pi_sd / pi_rd + 1
    d_k = x (x k / pi_rd + 1 / pi_sd)

with x the SINR threshold.  These run as an independent cross-check of
the general closed forms (they are derived by a different reduction)
and as the reference curves for the diversity-order fits.
"""
from __future__ import annotations

import math

__all__ = ["outage_ndl", "outage_idl", "outage_idl_dt", "outage_sdf"]


def _per_path_ccdf(p, lam, a, b):
    """exp(-a/p) / (1 + b p^(lambda-1)), the per-path survival factor."""
    return math.exp(-a / p - math.log1p(b * p ** (lam - 1.0)))


def outage_ndl(p: float, x: float, k: int, lam: float,
               pi_sr: float, pi_rd: float, pi_rr: float) -> float:
    """(1 - e^(-a/p)/(1 + b p^(lambda-1)))^k without cancellation.

    The inner difference is computed as -expm1(-a/p - log1p(.)) so the
    high-power tail keeps full relative accuracy.
    """
    a = x * (1.0 / pi_sr + 1.0 / pi_rd)
    b = x * pi_rr / pi_sr
    per = -math.expm1(-a / p - math.log1p(b * p ** (lam - 1.0)))
    return per ** k


def outage_idl(p: float, x: float, k: int, lam: float,
               pi_sr: float, pi_rd: float, pi_rr: float, pi_sd: float) -> float:
    """Interfering-direct-link outage: sum_j C(k,j) (-s)^j / c_j."""
    a = x * (1.0 / pi_sr + 1.0 / pi_rd)
    b = x * pi_rr / pi_sr
    s = _per_path_ccdf(p, lam, a, b)
    terms = [math.comb(k, j) * (-s) ** j / (x * j * pi_sd / pi_rd + 1.0)
             for j in range(k + 1)]
    return min(max(math.fsum(terms), 0.0), 1.0)


def outage_idl_dt(p: float, x: float, k: int, lam: float,
                  pi_sr: float, pi_rd: float, pi_rr: float, pi_sd: float) -> float:
    """Hybrid outage: sum_j C(k,j) (-s)^j (1 - e^(-d_j/p)) / c_j."""
    a = x * (1.0 / pi_sr + 1.0 / pi_rd)
    b = x * pi_rr / pi_sr
    s = _per_path_ccdf(p, lam, a, b)
    terms = []
    for j in range(k + 1):
        c_j = x * j * pi_sd / pi_rd + 1.0
        d_j = x * (x * j / pi_rd + 1.0 / pi_sd)
        terms.append(math.comb(k, j) * (-s) ** j * (-math.expm1(-d_j / p)) / c_j)
    return min(max(math.fsum(terms), 0.0), 1.0)


def outage_sdf(p: float, x: float, k: int, lam: float,
               pi_sr: float, pi_rd: float, pi_rr: float, pi_sd: float) -> float:
    """Selective-cooperation outage.

    The j-th term carries (1 - e^(-x eta_j)) / (p pi_sd eta_j) with
    eta_j = (1/pi_sd - j/pi_rd)/p, which has a removable zero at
    eta_j = 0; -expm1(-w)/w is evaluated directly (it is 1 at w = 0).
    """
    a = x * (1.0 / pi_sr + 1.0 / pi_rd)
    b = x * pi_rr / pi_sr
    s = _per_path_ccdf(p, lam, a, b)
    terms = []
    for j in range(k + 1):
        w = x * (1.0 / pi_sd - j / pi_rd) / p
        ratio = 1.0 if w == 0.0 else -math.expm1(-w) / w
        terms.append(math.comb(k, j) * (-s) ** j * ratio * x / (p * pi_sd))
    return min(max(math.fsum(terms), 0.0), 1.0)
