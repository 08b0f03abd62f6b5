"""Asymptotic predictions of ``log F_N^{m,k}`` in the four regimes.

Conventions follow the theorems they implement:

* :func:`theorem1_logF` and :func:`theorem2_logF` take ``k`` and predict
  ``log F_N^{m,k+1}``;
* :func:`theorem3_logF` and :func:`theorem4_logF` take ``k`` and predict
  ``log F_N^{m,k}``.

:func:`regime_dispatch` always estimates ``log F_N^{m,k}`` and translates.
The liquid-region functions ``G``, ``H``, ``F`` are evaluated in mpmath with
a working precision that grows as ``kappa`` approaches ``0`` or ``kappa2``,
where their closed forms cancel catastrophically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np

from . import painleve as pII
from .errors import ParameterError, RegimeError
from .quadrature import tanh_sinh
from .saddles import (
    edge_constants,
    kappa2,
    kappa2_mp,
    mu_threshold,
    saddle_data,
    solve_z0,
)
from .special import log_barnes_g, zeta_prime_minus_one

ALMOST_MAXIMAL = "almost-maximal"
LARGE = "large"
CRITICAL = "critical"
SMALL = "small"

# dispatch thresholds, see regime_dispatch
K_ALMOST_MAXIMAL = 10
CRITICAL_EXPONENT = 0.38
SHARED_EXPONENT = 0.35
SMALL_DELTA = 0.02

ORDERS = ("N^2", "N", "log N", "1")


@dataclass(frozen=True)
class RegimeEstimate:
    """Prediction ``sum_j coefficient_j * basis_j(N)`` for ``log F_N^{m,k_target}``."""

    regime: str
    N: int
    k_target: int
    coefficients: dict
    error_scale: float
    alternatives: tuple = field(default=(), compare=False)
    note: str = ""

    @property
    def logF_pred(self) -> float:
        basis = {"N^2": self.N**2, "N": self.N, "log N": math.log(self.N), "1": 1.0}
        return sum(self.coefficients[o] * basis[o] for o in ORDERS)

    @property
    def ambiguous(self) -> bool:
        return bool(self.alternatives)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "N": self.N,
            "k_target": self.k_target,
            "logF_pred": self.logF_pred,
            "coefficients": dict(self.coefficients),
            "error_scale": self.error_scale,
            "ambiguous": self.ambiguous,
            "alternatives": [alt.to_dict() for alt in self.alternatives],
            "note": self.note,
        }


def _estimate(regime, N, k_target, c2, c1, clog, c0, error_scale, note=""):
    return RegimeEstimate(regime, N, k_target,
                          {"N^2": c2, "N": c1, "log N": clog, "1": c0}, error_scale, (), note)


def _check_common(N, m, eps, a):
    if N < 1:
        raise ParameterError(f"N={N} must be positive", "N >= 1")
    if not 1 <= m <= N - 1:
        raise ParameterError(f"m={m} must lie in [1, N-1] for asymptotics", "1 <= m <= N-1")
    if eps not in (0, 1):
        raise ParameterError(f"epsilon={eps} not in {{0,1}}", "epsilon in {0,1}")
    if not 0 < a <= 1:
        raise ParameterError(f"a={a} outside (0, 1]", "0 < a <= 1")


def log_aztec(N: int, a: float) -> float:
    """``log F_N(a) = N(N+1)/2 log(1+a^2)``."""
    return N * (N + 1) / 2 * math.log1p(a * a)


# Theorem 1 -----------------------------------------------------------------

def theorem1_coefficients(k: int, mu: float, a: float, eps: int) -> tuple[float, float, float, float]:
    """``(F2, F1, -k^2/2, F0)`` for the almost maximal corner."""
    sd = saddle_data(mu, a)
    L = math.log1p(a * a)
    f2 = (0.5 - mu + mu * mu) * L
    f1 = k * sd.phi0_at_x0 + (0.5 - eps * mu) * L
    f0 = (log_barnes_g(k + 1) - k * k / 2 * sd.log_x0sq_phi0pp
          + eps * k * math.log(1 - a * sd.x0) - k / 2 * math.log(2 * math.pi))
    return f2, f1, -k * k / 2, f0


def theorem1_logF(N: int, m: int, k: int, eps: int, a: float) -> RegimeEstimate:
    """Almost maximal corner: prediction for ``log F_N^{m,k+1}``, error ``O(N^{-1/2})``."""
    _check_common(N, m, eps, a)
    if k < 0:
        raise ParameterError(f"k={k} negative", "k >= 0")
    f2, f1, flog, f0 = theorem1_coefficients(k, m / N, a, eps)
    return _estimate(ALMOST_MAXIMAL, N, k + 1, f2, f1, flog, f0, N**-0.5)


# Liquid-region functions G, H, F ------------------------------------------

def _dps_for(distance) -> int:
    """Working precision for a point at ``distance`` from an end of the liquid range."""
    digits = max(0, -int(mpmath.floor(mpmath.log10(distance))))
    return min(400, 30 + 2 * digits)


@dataclass(frozen=True)
class GHF:
    G: mpmath.mpf
    H: mpmath.mpf
    F: mpmath.mpf


def _ghf_from_z0(data, mu, kappa, a, eps) -> GHF:
    m, k, A = mpmath.mpf(mu), kappa, mpmath.mpf(a)
    inv = 1 / A
    z0 = data.z0
    re, im = z0.real, z0.imag
    r0, rp, rm = data.abs_z0, data.abs_z0_plus_a, data.abs_z0_minus_inva
    L = mpmath.log((r0 + re) / im)
    G = ((m - k) / 2 * (mpmath.log(4 * r0**2 / (im * (r0 + re))) - re / r0 * L)
         - (1 - m) / 2 * (mpmath.log((r0 * rm + re * inv - r0**2) / (im / 2 * (rm + inv - re)))
                          + (re - inv) / rm * L)
         - m / 2 * (mpmath.log((r0 * rp + r0**2 + A * re) / (im / 2 * (rp + A + re)))
                    - (re + A) / rp * L))
    arg = mpmath.arg(z0)
    H = (mpmath.log(2 * r0 / (r0 + re)) + mpmath.log(mpmath.cos(arg / 2)))
    if eps:
        H += mpmath.log(A * im**2 / (2 * (rm + re - inv))
                        * (r0 + rm - inv) / (r0 + inv - rm)
                        * (r0 + re) / (r0 - re)) / 2
    g = data.gamma
    s = k + 1 - m
    Q = s / 2 * (z0 - g) / (z0 * (z0 + A) * (z0 - inv))
    dlogQ = 1 / (z0 - g) - 1 / z0 - 1 / (z0 + A) - 1 / (z0 - inv)
    sq_im = mpmath.sqrt(im)
    e0 = -mpmath.sqrt(2) * sq_im * Q
    e1 = mpmath.mpf(2) / 5 * dlogQ - mpmath.mpc(0, 1) / (10 * im)
    w8 = mpmath.expjpi(mpmath.mpf(1) / 4)
    g1 = w8 * mpmath.sqrt(2) * sq_im * (1 / (z0 + r0) + eps / (inv - z0 + abs(inv - z0)))
    ze = z0 * e0
    big = mpmath.mpf(5) / 12 / (z0 * ze) + mpmath.mpf(5) / 8 * e1 / ze - g1**2 / ze
    th = mpmath.tan(arg / 2)
    r8 = 2 * mpmath.sqrt(2)
    F = (sq_im / r8 * (th * big.imag - big.real)
         - (mpmath.mpf(3) / 16 / ze).imag / (r8 * sq_im)
         + th * ((mpmath.mpf(19) / 48 / ze).real / (r8 * sq_im)
                 + (mpmath.conj(w8) * g1 / (2 * ze)).imag))
    return GHF(G, H, F)


def ghf_mp(mu: float, a: float, eps: int, kappa=None, depth=None) -> GHF:
    """``G``, ``H``, ``F`` at ``kappa`` or at ``kappa2 - depth``, in mpmath.

    Exactly one of ``kappa`` and ``depth`` must be given.  The result is
    computed at a precision adapted to the distance from the range ends and
    returned at that precision (use it inside the same ``workdps`` block or
    convert to float).
    """
    if (kappa is None) == (depth is None):
        raise ParameterError("give exactly one of kappa and depth", "kappa xor depth")
    k2f = kappa2(mu, a)
    if depth is not None:
        dist = min(float(depth), k2f)
    else:
        dist = min(float(kappa), k2f - float(kappa))
    if dist <= 0:
        raise RegimeError(f"kappa outside the liquid range (0, {k2f:.6g})")
    dps = _dps_for(dist)
    with mpmath.workdps(dps):
        k = kappa2_mp(mu, a) - mpmath.mpf(depth) if depth is not None else mpmath.mpf(kappa)
        data = solve_z0(mu, k, a, eps, dps=dps)
        return _ghf_from_z0(data, mu, k, a, eps)


def G_fn(kappa: float, mu: float, a: float) -> float:
    return float(ghf_mp(mu, a, 1, kappa=kappa).G)


def H_fn(kappa: float, mu: float, a: float, eps: int) -> float:
    return float(ghf_mp(mu, a, eps, kappa=kappa).H)


def F_fn(kappa: float, mu: float, a: float, eps: int) -> float:
    return float(ghf_mp(mu, a, eps, kappa=kappa).F)


def dG_dkappa(kappa: float, mu: float, a: float) -> float:
    """Central difference of ``G`` with one Richardson extrapolation step."""
    k2 = kappa2(mu, a)
    h = max(1e-6, 1e-4 * min(kappa, k2 - kappa))
    h = min(h, 0.5 * min(kappa, k2 - kappa))

    def central(step):
        return (G_fn(kappa + step, mu, a) - G_fn(kappa - step, mu, a)) / (2 * step)

    return (4 * central(h / 2) - central(h)) / 3


def dG_dkappa_fit(kappa: float, mu: float, a: float, width: float = 1e-3, points: int = 9) -> float:
    """Derivative at ``kappa`` of a least-squares cubic through nearby ``G`` values."""
    k2 = kappa2(mu, a)
    width = min(width, 0.5 * min(kappa, k2 - kappa))
    xs = np.linspace(-width, width, points)
    ys = np.array([G_fn(kappa + x, mu, a) for x in xs])
    return float(np.polynomial.polynomial.polyfit(xs / width, ys, 3)[1] / width)


# Integrals of G, H, F --------------------------------------------------------

def _liquid_integrals(upper, mu, a, eps, tol, to_kappa2=False):
    """``int_0^upper (G, H, F - 1/(12 kappa))`` over the liquid range.

    The range is split at half its length.  The lower piece uses
    ``kappa = t^2``; the upper piece is parametrised by the depth
    ``d = kappa2 - kappa = u^2`` and integrates ``F - 1/(12 kappa) - 1/(8 d)``,
    whose ``1/(8 d)`` part is added back analytically unless ``to_kappa2``
    (then the subtracted integral is the one requested).
    """
    k2 = kappa2(mu, a)
    split = 0.5 * upper

    def lower(t):
        kap = t * t
        v = ghf_mp(mu, a, eps, kappa=kap)
        with mpmath.workdps(_dps_for(min(kap, k2 - kap))):
            extra = 1 / (8 * (kappa2_mp(mu, a) - mpmath.mpf(kap))) if to_kappa2 else 0
            f_reg = v.F - 1 / (12 * mpmath.mpf(kap)) - extra
            return 2 * t * np.array([float(v.G), float(v.H), float(f_reg)])

    def upper_piece(u):
        d = u * u
        v = ghf_mp(mu, a, eps, depth=d)
        with mpmath.workdps(_dps_for(min(d, k2))):
            kap = kappa2_mp(mu, a) - mpmath.mpf(d)
            f_reg = v.F - 1 / (12 * kap) - 1 / (8 * mpmath.mpf(d))
            return 2 * u * np.array([float(v.G), float(v.H), float(f_reg)])

    low = tanh_sinh(lower, 0.0, math.sqrt(split), tol=tol, min_gap=1e-12)
    d_lo = 0.0 if to_kappa2 else k2 - upper
    d_hi = k2 - split
    up = tanh_sinh(upper_piece, math.sqrt(d_lo), math.sqrt(d_hi), tol=tol, min_gap=1e-12)
    total = low.value + up.value
    if not to_kappa2:
        total[2] += math.log(d_hi / d_lo) / 8
    return total, max(low.error, up.error)


@dataclass(frozen=True)
class CCoefficients:
    kappa_plus: float
    mu: float
    a: float
    epsilon: int
    C2: float
    C1: float
    C0: float
    quad_error: float


@lru_cache(maxsize=256)
def C_coefficients(kappa_plus: float, mu: float, a: float, eps: int, tol: float = 1e-10) -> CCoefficients:
    """``C2, C1, C0`` of the large-corner expansion at ``kappa_plus``."""
    k2 = kappa2(mu, a)
    if not 0 < kappa_plus < k2:
        raise RegimeError(f"kappa_+={kappa_plus} outside (0, kappa2={k2:.6g})")
    sd = saddle_data(mu, a)
    L = math.log1p(a * a)
    (iG, iH, iF), err = _liquid_integrals(kappa_plus, mu, a, eps, tol)
    c2 = (0.5 - mu + mu * mu) * L + iG
    c1 = iH - sd.phi0_at_x0 / 2 + (0.5 - eps * mu) * L
    c0 = (iF + math.log(kappa_plus) / 12 - dG_dkappa(kappa_plus, mu, a) / 24
          - sd.log_x0sq_phi0pp / 6 - eps / 2 * math.log(1 - a * sd.x0) + zeta_prime_minus_one())
    return CCoefficients(kappa_plus, mu, a, eps, c2, c1, c0, err)


def C_small_kappa(kappa_plus: float, mu: float, a: float, eps: int) -> tuple[float, float, float]:
    """Small ``kappa_+`` expansions of ``C2`` (to ``O(k^3)``), ``C1`` (``O(k^2)``), ``C0`` (``O(k)``)."""
    sd = saddle_data(mu, a)
    L = math.log1p(a * a)
    lk = math.log(kappa_plus)
    lq = sd.log_x0sq_phi0pp
    c2 = ((0.5 - mu + mu * mu) * L + kappa_plus * sd.phi0_at_x0 + kappa_plus**2 / 2 * lk
          - kappa_plus**2 / 4 * (3 + 2 * lq))
    c1 = (-sd.phi0_at_x0 / 2 + (0.5 - eps * mu) * L - kappa_plus / 2 * lk
          + kappa_plus / 2 * (1 + lq + 2 * eps * math.log(1 - a * sd.x0)))
    c0 = lk / 24 - 3 / 24 * lq - eps / 2 * math.log(1 - a * sd.x0) + zeta_prime_minus_one()
    return c2, c1, c0


def C_near_kappa2(kappa_plus: float, mu: float, a: float) -> tuple[float, float]:
    """Leading behaviour of ``C2`` and ``C1`` as ``kappa_+ -> kappa2``."""
    _, cs, _ = edge_constants(mu, a)
    L = math.log1p(a * a)
    return L / 2 - (kappa2(mu, a) - kappa_plus) ** 3 / (12 * cs), L / 2


def theorem2_logF(N: int, m: int, k: int, eps: int, a: float, tol: float = 1e-10) -> RegimeEstimate:
    """Large corner: prediction for ``log F_N^{m,k+1}`` with ``kappa_+ = (2k+1)/(2N)``."""
    _check_common(N, m, eps, a)
    mu = m / N
    kp = (2 * k + 1) / (2 * N)
    k2 = kappa2(mu, a)
    if not 0 < kp < k2:
        raise RegimeError(f"kappa_+={kp:.6g} outside (0, kappa2={k2:.6g})")
    c = C_coefficients(kp, mu, a, eps, tol)
    return _estimate(LARGE, N, k + 1, c.C2, c.C1, -1.0 / 12.0, c.C0,
                     1.0 / (N * (k2 - k / N) ** 2), note="error also has an unquantified o(1)")


# Theorems 3 and 4 -------------------------------------------------------------

def tw_argument(N: int, m: int, k: int, a: float) -> float:
    """``s* N^{2/3} (kappa - kappa2)`` with ``kappa = k/N``."""
    mu = m / N
    _, _, ss = edge_constants(mu, a)
    return ss * N ** (2.0 / 3.0) * (k / N - kappa2(mu, a))


def theorem3_logF(N: int, m: int, k: int, eps: int, a: float,
                  painleve: pII.PainleveSolution | None = None) -> RegimeEstimate:
    """Critical corner: ``log F_N(a) + log F^TW(s)`` for ``log F_N^{m,k}``."""
    _check_common(N, m, eps, a)
    mu = m / N
    if mu < mu_threshold(a) * (1 + SMALL_DELTA):
        raise RegimeError(f"mu={mu:.6g} too close to or below a^2/(1+a^2)")
    s = tw_argument(N, m, k, a)
    ltw = pII.log_FTW(s, painleve)
    L = math.log1p(a * a)
    delta = k / N - kappa2(mu, a)
    scaled = N ** (2.0 / 3.0) * delta
    if abs(scaled) <= 1:
        err = N ** (-1.0 / 3.0)
    elif scaled > 0:
        err = math.exp(-N * delta**1.5) / (N**0.5 * delta**0.25)
    else:
        err = N**3 * abs(delta) ** 5
    return _estimate(CRITICAL, N, k, L / 2, L / 2, 0.0, ltw, err, note=f"s={s:.15g}")


def theorem3_deep_left(N: int, m: int, k: int, a: float) -> float:
    """Deep-left form of the critical prediction, via the left TW tail."""
    mu = m / N
    _, cs, _ = edge_constants(mu, a)
    M = N ** (2.0 / 3.0) * (kappa2(mu, a) - k / N)
    if M <= 0:
        raise RegimeError("deep-left form needs kappa < kappa2")
    return (log_aztec(N, a) - M**3 / (12 * cs) - math.log(M) / 8
            + math.log(2 * cs) / 24 + zeta_prime_minus_one())


def theorem4_logF(N: int, m: int, k: int, a: float) -> RegimeEstimate:
    """Small corner: ``log F_N^{m,k} ~ log F_N(a)`` up to ``exp(-c N (kappa-kappa2)^{3/2})``.

    The constant ``c`` is unspecified; ``error_scale`` uses ``c = 1``.
    """
    _check_common(N, m, 1, a)
    mu = m / N
    k2 = kappa2(mu, a)
    kappa = k / N
    if kappa <= k2:
        raise RegimeError(f"kappa={kappa:.6g} not above kappa2={k2:.6g}")
    L = math.log1p(a * a)
    return _estimate(SMALL, N, k, L / 2, L / 2, 0.0, 0.0,
                     math.exp(-N * (kappa - k2) ** 1.5), note="error constant unspecified (c=1 shown)")


# Identities ----------------------------------------------------------------------

def identity_checks(mu: float, a: float, eps: int, tol: float = 1e-10) -> dict:
    """Integrals of ``G``, ``H``, ``F`` over the whole liquid range vs closed forms."""
    if mu <= mu_threshold(a) + 1e-3 or mu >= 1 - 1e-3:
        raise RegimeError(f"mu={mu} outside (a^2/(1+a^2), 1) with margin")
    k2 = kappa2(mu, a)
    sd = saddle_data(mu, a)
    L = math.log1p(a * a)
    (iG, iH, iF), err = _liquid_integrals(k2, mu, a, eps, tol, to_kappa2=True)
    expected = {
        "G": mu * (1 - mu) * L,
        "H": sd.phi0_at_x0 / 2 + eps * mu * L,
        "F": (-5 / 24 * math.log(k2) + sd.log_x0sq_phi0pp / 6
              + eps / 2 * math.log(1 - a * sd.x0) + math.log(2 * sd.cstar) / 24),
    }
    values = {"G": float(iG), "H": float(iH), "F": float(iF)}
    return {
        "mu": mu, "a": a, "epsilon": eps, "kappa2": k2, "quad_error": err,
        "integral": values, "expected": expected,
        "residual": {key: values[key] - expected[key] for key in values},
    }


# Dispatch -------------------------------------------------------------------------

def regime_dispatch(N: int, m: int, k: int, eps: int, a: float,
                    painleve: pII.PainleveSolution | None = None) -> RegimeEstimate:
    """Best available estimate of ``log F_N^{m,k}``.

    Thresholds (all regimes are asymptotic, the cut points are choices):

    * almost maximal when ``k - 1 <= 10``;
    * small when ``kappa >= kappa2 + 0.02`` or the Tracy-Widom argument
      exceeds 6 (where ``log F^TW`` is below 1e-7);
    * critical when ``k >= N kappa2 - N^0.38``; below
      ``N kappa2 - N^0.35`` the large-corner estimate is attached as an
      alternative (both theorems apply there);
    * large otherwise.
    """
    _check_common(N, m, eps, a)
    if not 1 <= k <= m + 1:
        raise ParameterError(f"k={k} outside [1, m+1]", "1 <= k <= m+1")
    mu = m / N
    k2 = kappa2(mu, a)
    kappa = k / N
    has_edge = mu >= mu_threshold(a) * (1 + SMALL_DELTA)
    if k - 1 <= K_ALMOST_MAXIMAL:
        est = theorem1_logF(N, m, k - 1, eps, a)
        alts = ()
        if k - 1 >= 2 and (2 * k - 1) / (2 * N) < k2:
            alts = (theorem2_logF(N, m, k - 1, eps, a),)
        return _with_alternatives(est, alts)
    if has_edge:
        s = tw_argument(N, m, k, a)
        if kappa >= k2 + SMALL_DELTA or s > pII.RIGHT_SWITCH:
            return theorem4_logF(N, m, k, a)
        if k >= N * k2 - N**CRITICAL_EXPONENT:
            est = theorem3_logF(N, m, k, eps, a, painleve)
            alts = ()
            if k < N * k2 - N**SHARED_EXPONENT:
                alts = (theorem2_logF(N, m, k - 1, eps, a),)
            return _with_alternatives(est, alts)
    elif kappa >= k2:
        raise RegimeError(f"mu={mu:.6g} has no critical edge and kappa >= kappa2")
    return theorem2_logF(N, m, k - 1, eps, a)


def _with_alternatives(est: RegimeEstimate, alts) -> RegimeEstimate:
    if not alts:
        return est
    return RegimeEstimate(est.regime, est.N, est.k_target, est.coefficients, est.error_scale,
                          tuple(alts), est.note)
