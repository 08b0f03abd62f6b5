"""Hastings-McLeod solution of Painleve II and the Tracy-Widom distribution.

``u'' = s u + 2 u^3`` with ``u ~ Ai(s)`` as ``s -> +inf`` and
``u ~ sqrt(-s/2)`` as ``s -> -inf``.  With ``q(s) = -int_s^inf u^2`` the GUE
Tracy-Widom distribution satisfies ``d/ds log F(s) = -q(s)``, i.e.
``log F(s) = -int_s^inf (x - s) u(x)^2 dx``.

The solution is obtained as a two-point boundary value problem for the
augmented state ``(u, u', q, log F)``, anchored by the Airy function on the
right and by the algebraic expansion on the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_bvp

from .errors import AccuracyError, ParameterError
from .special import airy_ai, airy_tail_integrals, zeta_prime_minus_one

LEFT_SWITCH = -10.0
RIGHT_SWITCH = 6.0

# u(s) = sqrt(-s/2) (1 + sum_j c_j s^{-3j}) as s -> -inf
_LEFT_SERIES = (1.0 / 8.0, -73.0 / 128.0, 10657.0 / 1024.0)


def u_left_expansion(s: float) -> tuple[float, float]:
    """``(u, u')`` from the large negative ``s`` expansion."""
    base = math.sqrt(-s / 2)
    corr = 1.0
    dcorr = 0.0
    for j, c in enumerate(_LEFT_SERIES, start=1):
        corr += c * s ** (-3 * j)
        dcorr += -3 * j * c * s ** (-3 * j - 1)
    dbase = -1.0 / (4 * base)
    return base * corr, dbase * corr + base * dcorr


def log_ftw_left_tail(s: float) -> float:
    """``-|s|^3/12 - log|s|/8 + log(2)/24 + zeta'(-1)``, error ``O(|s|^{-3/2})``."""
    t = abs(s)
    return -t**3 / 12 - math.log(t) / 8 + math.log(2) / 24 + zeta_prime_minus_one()


def log_ftw_right_tail(s: float) -> float:
    """``-exp(-4/3 s^{3/2}) / (16 pi s^{3/2})``, the leading right tail.

    Negative because ``F <= 1``; it is minus the Airy kernel estimate of
    ``int_s^inf (x-s) Ai(x)^2 dx``.
    """
    return -math.exp(-4.0 / 3.0 * s**1.5) / (16 * math.pi * s**1.5)


def q_left_expansion(s: float) -> float:
    """``-s^2/4 + 1/(8 s)``, error ``O(|s|^{-5/2})``."""
    return -s * s / 4 + 1 / (8 * s)


@dataclass(frozen=True)
class PainleveSolution:
    """Tabulated Hastings-McLeod solution with a dense interpolant."""

    grid: np.ndarray
    u: np.ndarray
    q: np.ndarray
    logFTW: np.ndarray
    tol: float
    rms_residual: float
    _interp: object = field(repr=False, compare=False)

    @property
    def s_min(self) -> float:
        return float(self.grid[0])

    @property
    def s_max(self) -> float:
        return float(self.grid[-1])

    def state(self, s):
        """Interpolated ``(u, u', q, log F)`` at ``s`` (scalar or array)."""
        return self._interp(s)

    def u_at(self, s):
        return self._interp(s)[0]

    def q_at(self, s):
        return self._interp(s)[2]


def _rhs(s, y):
    u, up, q, _ = y
    return np.vstack([up, s * u + 2 * u**3, u * u, -q])


def solve_hastings_mcleod(s_min: float = -14.0, s_max: float = 8.0, tol: float = 1e-10,
                          nodes: int = 400) -> PainleveSolution:
    """Collocation solve of the augmented Painleve II boundary value problem.

    Raises :class:`AccuracyError` when the collocation residual does not
    reach ``tol``.
    """
    if not s_min < s_max:
        raise ParameterError("need s_min < s_max", "s_min < s_max")
    if tol < 1e-12:
        raise ParameterError(f"tol={tol} below 1e-12", "tol >= 1e-12")
    u_left, _ = u_left_expansion(s_min)
    ai_right, _ = airy_ai(s_max)
    int_u2, int_xu2 = airy_tail_integrals(s_max)

    def bc(ya, yb):
        return np.array([ya[0] - u_left, yb[0] - ai_right, yb[2] + int_u2, yb[3] + int_xu2])

    s = np.linspace(s_min, s_max, nodes)
    # initial guess: algebraic branch on the left, Airy on the right
    ai = np.array([airy_ai(x)[0] for x in s])
    u0 = np.sqrt(np.maximum(-s / 2, 0.0)) + ai
    up0 = np.gradient(u0, s)
    q0 = -np.cumsum((u0**2)[::-1])[::-1] * (s[1] - s[0])
    w0 = -np.cumsum((-q0)[::-1])[::-1] * (s[1] - s[0])
    y0 = np.vstack([u0, up0, q0, w0])
    res = solve_bvp(_rhs, bc, s, y0, tol=tol, max_nodes=200000, bc_tol=tol)
    if res.status != 0:
        raise AccuracyError(f"Painleve II collocation failed: {res.message}",
                            achieved=float(np.max(res.rms_residuals)))
    grid = res.x
    return PainleveSolution(grid, res.y[0].copy(), res.y[2].copy(), res.y[3].copy(), tol,
                            float(np.max(res.rms_residuals)), res.sol)


@lru_cache(maxsize=4)
def default_solution(tol: float = 1e-10) -> PainleveSolution:
    """Shared solution on ``[-14, 8]``; solving once serves every query."""
    return solve_hastings_mcleod(tol=tol)


def log_ftw_with_source(s: float, sol: PainleveSolution | None = None) -> tuple[float, str]:
    """``log F^TW(s)`` and where it came from: grid, left-tail or right-tail."""
    if sol is None:
        sol = default_solution()
    if s < LEFT_SWITCH:
        return log_ftw_left_tail(s), "left-tail"
    if s > RIGHT_SWITCH:
        return log_ftw_right_tail(s), "right-tail"
    if not sol.s_min <= s <= sol.s_max:
        raise ParameterError(f"s={s} outside solved range [{sol.s_min}, {sol.s_max}]",
                             "s within grid or tail zones")
    return float(sol.state(s)[3]), "grid"


def log_FTW(s: float, sol: PainleveSolution | None = None) -> float:
    """``log F^TW(s)`` from the grid, switching to tail formulas outside ``[-10, 6]``."""
    return log_ftw_with_source(s, sol)[0]


def log_ftw_by_quadrature(s: float, sol: PainleveSolution, points: int = 4001) -> float:
    """``-int_s^inf (x-s) u^2`` using the interpolated ``u`` and the Airy tail.

    Independent of the integrated ``log F`` component of the solver state.
    """
    x = np.linspace(s, sol.s_max, points)
    u = sol.u_at(x)
    y = (x - s) * u * u
    h = x[1] - x[0]
    # composite Simpson
    body = h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum())
    int_u2, int_xu2 = airy_tail_integrals(sol.s_max)
    tail = int_xu2 + (sol.s_max - s) * int_u2
    return -(body + tail)
