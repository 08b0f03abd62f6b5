"""Special functions: Barnes G at integers, zeta'(-1) and the Airy function."""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath


@lru_cache(maxsize=None)
def zeta_prime_minus_one() -> float:
    """``zeta'(-1) = 1/12 - log A`` with A the Glaisher-Kinkelin constant."""
    with mpmath.workdps(30):
        return float(mpmath.zeta(-1, derivative=1))


def barnes_g(n: int) -> int:
    """Barnes G-function at a positive integer, ``G(n) = prod_{j=1}^{n-2} j!``."""
    if n < 1:
        raise ValueError(f"barnes_g needs a positive integer, got {n}")
    out, fact = 1, 1
    for j in range(1, n - 1):
        fact *= j
        out *= fact
    return out


def log_barnes_g(n: int) -> float:
    """Natural log of :func:`barnes_g`, exact up to the final rounding."""
    return sum(math.lgamma(j + 1) for j in range(1, n - 1))


def log_barnes_g_asymptotic(k: float) -> float:
    """Large-``k`` expansion of ``log G(k+1)`` with error ``O(1/k)``."""
    h = k + 0.5
    return (k * k / 2 * math.log(h) - 3 * k * k / 4 - k / 4 + k / 2 * math.log(2 * math.pi)
            - math.log(h) / 12 + 1 / 16 + zeta_prime_minus_one())


# Airy function -----------------------------------------------------------
#
# Below AIRY_SWITCH the Maclaurin series is summed in extended precision to
# survive the cancellation between its two halves; above it the asymptotic
# series in zeta = (2/3) x**(3/2) is used, truncated at its smallest term.

AIRY_SWITCH = 8.5


def _airy_series(x: float) -> tuple[float, float]:
    with mpmath.workdps(50):
        c1 = mpmath.mpf(1) / (mpmath.cbrt(9) * mpmath.gamma(mpmath.mpf(2) / 3))
        c2 = mpmath.mpf(1) / (mpmath.cbrt(3) * mpmath.gamma(mpmath.mpf(1) / 3))
        x = mpmath.mpf(x)
        x3 = x ** 3
        # f = sum 3^k (1/3)_k x^{3k}/(3k)!, g = sum 3^k (2/3)_k x^{3k+1}/(3k+1)!
        f, g = mpmath.mpf(1), x
        fp, gp = mpmath.mpf(0), mpmath.mpf(1)
        tf, tg = mpmath.mpf(1), x
        k = 0
        while True:
            k += 1
            tf = tf * x3 / ((3 * k - 1) * (3 * k))
            tg = tg * x3 / ((3 * k) * (3 * k + 1))
            f += tf
            g += tg
            # derivatives termwise
            fp += tf * 3 * k / x if x != 0 else 0
            gp += tg * (3 * k + 1) / x if x != 0 else 0
            if abs(tf) + abs(tg) < mpmath.mpf(10) ** -45 * (abs(f) + abs(g)):
                break
        ai = c1 * f - c2 * g
        aip = c1 * fp - c2 * gp
        return float(ai), float(aip)


def _airy_asymptotic(x: float) -> tuple[float, float]:
    zeta = 2.0 / 3.0 * x ** 1.5
    # u_k and v_k coefficients of the standard expansion
    s_u, s_v = 1.0, 1.0
    u, v = 1.0, 1.0
    term_prev = math.inf
    k = 0
    while True:
        k += 1
        u_next = u * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
        v_next = -u_next * (6 * k + 1) / (6 * k - 1)
        t = abs(u_next) / zeta ** k
        if t > term_prev or t < 1e-17:
            break
        term_prev = t
        u, v = u_next, v_next
        sign = (-1) ** k
        s_u += sign * u / zeta ** k
        s_v += sign * v / zeta ** k
    pref = math.exp(-zeta) / (2 * math.sqrt(math.pi))
    return pref * x ** -0.25 * s_u, -pref * x ** 0.25 * s_v


def airy_ai(x: float) -> tuple[float, float]:
    """``(Ai(x), Ai'(x))`` for ``x >= -10`` to about 1e-14 relative accuracy."""
    if x >= AIRY_SWITCH:
        return _airy_asymptotic(x)
    return _airy_series(x)


def airy_tail_integrals(x: float) -> tuple[float, float]:
    """``(int_x^inf Ai^2, int_x^inf (t - x) Ai(t)^2 dt)`` in closed form.

    Uses ``int_x^inf Ai^2 = Ai'(x)^2 - x Ai(x)^2`` and
    ``int_x^inf (t-x) Ai^2 = (2 x^2 Ai^2 - 2 x Ai'^2 - Ai Ai') / 3``.
    """
    ai, aip = airy_ai(x)
    first = aip * aip - x * ai * ai
    second = (2 * x * x * ai * ai - 2 * x * aip * aip - ai * aip) / 3
    return first, second
