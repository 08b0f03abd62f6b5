"""Saddle points and edge constants of the asymptotic analysis.

Notation: ``mu = m/N`` locates the corner of the removed region, ``kappa``
its depth, ``a`` the vertical weight.  Quantities that are only needed in
double precision are returned as floats; the liquid-region saddle ``z0`` is
computed in mpmath so that the closed forms built on it (which cancel
heavily near the ends of the liquid interval) keep their accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.optimize import brentq

from .errors import AccuracyError, ParameterError, RegimeError

Z0_DPS = 40
# width of the excluded strip around mu = a^2/(1+a^2) for the edge constants
EDGE_STRIP = 1e-3


def _check_mu_a(mu, a):
    if not 0 < mu < 1:
        raise ParameterError(f"mu={mu} outside (0, 1)", "0 < mu < 1")
    if not 0 < a <= 1:
        raise ParameterError(f"a={a} outside (0, 1]", "0 < a <= 1")


def kappa2(mu: float, a: float) -> float:
    """Depth at which the tip of the removed corner touches the arctic curve."""
    _check_mu_a(mu, a)
    return (a * a * (2 * mu - 1) + 2 * a * math.sqrt(mu * (1 - mu))) / (1 + a * a)


def mu_threshold(a: float) -> float:
    """``a^2/(1+a^2)``: below it the corner tip stays inside the frozen region."""
    return a * a / (1 + a * a)


def phi0(z, mu, a):
    """``(1-mu) log(1-a z) + mu log(z/(z+a))`` with principal logarithms."""
    return (1 - mu) * np.log(1 - a * z) + mu * np.log(z / (z + a))


def phi0_prime(z, mu, a):
    return -a * (1 - mu) / (1 - a * z) + mu * (1 / z - 1 / (z + a))


def phi0_second(z, mu, a):
    return -a * a * (1 - mu) / (1 - a * z) ** 2 + mu * (-1 / z**2 + 1 / (z + a) ** 2)


def x0_phi0(mu: float, a: float) -> tuple[float, float, float]:
    """Real saddle ``x0 < -a`` of ``phi0`` with ``phi0(x0)`` and ``phi0''(x0)``."""
    _check_mu_a(mu, a)
    if mu > 1 - 1e-12:
        raise ParameterError("x0 degenerates as mu -> 1", "mu < 1")
    x0 = (-a - math.sqrt(a * a + 4 * mu * (1 - mu))) / (2 * (1 - mu))
    return x0, float(phi0(x0, mu, a)), float(phi0_second(x0, mu, a))


def edge_constants(mu: float, a: float) -> tuple[float, float, float]:
    """``(x*, c*, s*)`` governing the Tracy-Widom edge at ``kappa = kappa2``.

    ``x*`` is evaluated in a form without the removable singularity at
    ``mu = 1/(1+a^2)``.
    """
    _check_mu_a(mu, a)
    thr = mu_threshold(a)
    if mu <= thr + EDGE_STRIP:
        raise RegimeError(
            f"mu={mu} not above a^2/(1+a^2)={thr:.6g} (+{EDGE_STRIP}); no critical edge"
        )
    k2 = kappa2(mu, a)
    xs = (k2 + a * a * (2 * mu - k2 - 1)) / (2 * a * (1 + k2 - mu))
    cs = (mu - k2 + a**3 * (1 - mu) / (1 / xs - a) ** 3 - mu / (1 + a / xs) ** 3)
    if cs <= 0:
        raise RegimeError(f"c*={cs} is not positive at mu={mu}, a={a}")
    return xs, cs, cs ** (-1.0 / 3.0)


def xstar_direct(mu: float, a: float) -> float:
    """``x*`` from its defining formula (singular at ``mu = 1/(1+a^2)``)."""
    return (a - (1 + a * a) * math.sqrt(mu * (1 - mu))) / ((1 + a * a) * mu - 1)


def sstar_from_cubic(mu: float, a: float) -> float:
    """``s*`` as ``1/(2 x* f*)`` with ``f* = (-phi'''(x*)/16)^(1/3)``.

    ``phi(z) = (kappa2-mu) log z + (1-mu) log(1-a z) + mu log(z+a)`` has a
    triple critical point at ``x*``; this is an independent route to ``s*``.
    """
    xs, _, _ = edge_constants(mu, a)
    k2 = kappa2(mu, a)
    third = (2 * (k2 - mu) / xs**3 - 2 * a**3 * (1 - mu) / (1 - a * xs) ** 3
             + 2 * mu / (xs + a) ** 3)
    f = (-third / 16) ** (1.0 / 3.0)
    return 1 / (2 * xs * f)


def z0_half_coefficient(mu: float, a: float) -> float:
    """Coefficient of ``i sqrt(kappa2-kappa)`` in ``z0`` as ``kappa -> kappa2``."""
    r = math.sqrt((1 - mu) * mu)
    return (math.sqrt(2) * (1 + a * a) ** 1.5 * r**0.5
            / (math.sqrt(a) * (1 - (1 - a * a) * mu + 2 * a * r)))


@dataclass(frozen=True)
class PhaseParams:
    mu: float
    kappa: float
    a: float
    epsilon: int = 1

    def __post_init__(self):
        _check_mu_a(self.mu, self.a)
        if self.kappa < 0:
            raise ParameterError(f"kappa={self.kappa} negative", "kappa >= 0")
        if self.epsilon not in (0, 1):
            raise ParameterError(f"epsilon={self.epsilon} not in {{0,1}}", "epsilon")


@dataclass(frozen=True)
class SaddleData:
    mu: float
    a: float
    kappa2: float
    x0: float
    phi0_at_x0: float
    phi0pp_at_x0: float
    xstar: float | None = None
    cstar: float | None = None
    sstar: float | None = None

    @property
    def log_x0sq_phi0pp(self) -> float:
        """``log(x0^2 phi0''(x0))``, recurring in every regime."""
        return math.log(self.x0**2 * self.phi0pp_at_x0)


def saddle_data(mu: float, a: float) -> SaddleData:
    """Real saddle quantities; edge constants are ``None`` when undefined."""
    x0, p0, p2 = x0_phi0(mu, a)
    try:
        xs, cs, ss = edge_constants(mu, a)
    except RegimeError:
        xs = cs = ss = None
    return SaddleData(mu, a, kappa2(mu, a), x0, p0, p2, xs, cs, ss)


@dataclass(frozen=True)
class LiquidSaddleData:
    """The saddle ``z0`` in the upper half plane and its moduli, in mpmath."""

    params: PhaseParams
    z0: mpmath.mpc
    gamma: mpmath.mpf
    abs_z0: mpmath.mpf
    abs_z0_plus_a: mpmath.mpf
    abs_z0_minus_inva: mpmath.mpf
    residuals: tuple[float, float]

    @property
    def closure_residual(self) -> float:
        a = mpmath.mpf(self.params.a)
        lhs = (1 + a * a) * (1 + self.abs_z0**2)
        rhs = a * a * self.abs_z0_minus_inva**2 + self.abs_z0_plus_a**2
        return float(lhs - rhs)


def quartic_coefficients(mu, kappa, a):
    """Coefficients of ``p(gamma)``, highest degree first."""
    return [
        a * (kappa + 1 - mu),
        a * a * kappa + a * a - kappa + 2 * mu - 2,
        -3 * a,
        a * a * (kappa - 1) + (2 * mu - kappa),
        a * (mu - kappa),
    ]


def _horner(coeffs, x):
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def quartic_brackets(mu: float, kappa: float, a: float) -> list[tuple[float, float]]:
    """The four intervals expected to hold one real root of ``p`` each."""
    c = quartic_coefficients(mu, kappa, a)
    big = 1 + max(abs(ci / c[0]) for ci in c[1:])
    return [(-big, -a), (-a, 0.0), (0.0, 1 / a), (1 / a, big)]


def quartic_roots(mu: float, kappa: float, a: float) -> list[float]:
    """Real roots of ``p``, one per bracket, by bracketing root search.

    Raises :class:`RegimeError` if some bracket shows no sign change, which
    happens outside the liquid range ``0 < kappa < kappa2``.
    """
    c = quartic_coefficients(mu, kappa, a)
    roots = []
    for lo, hi in quartic_brackets(mu, kappa, a):
        plo, phi = _horner(c, lo), _horner(c, hi)
        if plo == 0:
            roots.append(lo)
            continue
        if plo * phi > 0:
            raise RegimeError(f"p has no sign change on ({lo:.6g}, {hi:.6g})")
        roots.append(brentq(lambda g: _horner(c, g), lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500))
    return roots


def kappa2_mp(mu, a):
    """:func:`kappa2` in the working mpmath precision."""
    m, A = mpmath.mpf(mu), mpmath.mpf(a)
    return (A * A * (2 * m - 1) + 2 * A * mpmath.sqrt(m * (1 - m))) / (1 + A * A)


def _liquid_root_float(mu, kappa, a):
    c = quartic_coefficients(mu, kappa, a)
    lo, hi = 0.0, 1 / a
    if _horner(c, lo) * _horner(c, hi) > 0:
        raise RegimeError(f"p has no root in (0, 1/a) at kappa={kappa}")
    return brentq(lambda g: _horner(c, g), lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)


def solve_z0(mu: float, kappa, a: float, epsilon: int = 1, dps: int = Z0_DPS) -> LiquidSaddleData:
    """Unique ``z0`` with ``Im z0 > 0`` solving the liquid saddle system.

    The root of ``p`` in ``(0, 1/a)`` fixes ``|z0+a|``, ``|z0-1/a|`` and
    ``|z0|``; the real and imaginary parts then follow from the law of
    cosines in the triangle ``(-a, 0, z0)``.  ``kappa`` may be an mpmath
    number, which matters within ``10**-dps`` of the ends of the range.
    """
    params = PhaseParams(mu, float(kappa), a, epsilon)
    with mpmath.workdps(dps):
        m, k, A = mpmath.mpf(mu), mpmath.mpf(kappa), mpmath.mpf(a)
        k2 = kappa2_mp(mu, a)
        if not 0 < k < k2:
            raise RegimeError(
                f"kappa={float(kappa)} outside the liquid range (0, kappa2={float(k2):.6g})")
        c = quartic_coefficients(m, k, A)
        dc = [ci * (4 - n) for n, ci in enumerate(c[:-1])]
        g = mpmath.mpf(_liquid_root_float(mu, float(kappa), a))
        for _ in range(60):
            step = _horner(c, g) / _horner(dc, g)
            g -= step
            if abs(step) < mpmath.mpf(10) ** (-dps + 3) * (1 + abs(g)):
                break
        else:
            raise AccuracyError("Newton polish of the quartic root did not converge")
        if not 0 < g < 1 / A:
            raise RegimeError(f"root gamma={g} left (0, 1/a)")
        s = k + 1 - m
        r_plus = (1 + A * A) * m / ((A + g) * s)
        r_minus = (1 + A * A) * (1 - m) / (A * (1 - A * g) * s)
        r0 = (m - k) / ((1 - m + k) * g)
        re = (r_plus**2 - r0**2 - A * A) / (2 * A)
        im2 = r0**2 - re**2
        if im2 <= 0:
            raise AccuracyError(f"Im z0 not positive (Im^2={im2})", achieved=float(im2))
        z0 = mpmath.mpc(re, mpmath.sqrt(im2))
        res1 = (1 - m) / abs(z0 - 1 / A) + (m - k) / abs(z0) - m / abs(z0 + A)
        res2 = s - A * m / abs(z0 + A) - (1 - m) / (A * abs(z0 - 1 / A))
        return LiquidSaddleData(params, z0, g, r0, r_plus, r_minus, (float(res1), float(res2)))
