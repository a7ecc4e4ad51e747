"""Rescaled-convention Airy function and Fresnel tail integrals.

The Airy convention used throughout is

    Ai_p(y) = (1/pi) * int_0^infty cos(xi^3 + y*xi) dxi,

which satisfies Ai_p'' = (y/3) Ai_p and relates to the standard Airy
function by Ai_p(y) = 3^(-1/3) * Ai_std(3^(-1/3) y).  Evaluation is by
the Maclaurin series of Ai_std for moderate arguments and by the
standard asymptotic expansions beyond; the defining integral is used
only as a test oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import fresnel as _std_fresnel
from scipy.special import gamma as _gamma

_CBRT3 = 3.0 ** (1.0 / 3.0)
_AI0 = 3.0 ** (-2.0 / 3.0) / _gamma(2.0 / 3.0)       # Ai_std(0)
_AIP0 = -(3.0 ** (-1.0 / 3.0)) / _gamma(1.0 / 3.0)   # Ai_std'(0)
# extended-precision copies for the cancellation-prone series
_AI0_LD = np.longdouble("0.35502805388781723926006318600418")
_AIP0_LD = np.longdouble("-0.25881940379280679840518356018920")

# crossover between Maclaurin series and asymptotic expansion (std argument).
# On the positive side the series suffers e^{2 zeta} cancellation, so it is
# accumulated in extended precision and handed over early; on the negative
# side the series is benign and the oscillatory asymptotics need larger |x|.
_SERIES_CUT_POS = 5.8
_SERIES_CUT_NEG = 7.6


@dataclass(frozen=True)
class AiryValue:
    y: float
    ai: float
    ai_prime: float


@dataclass(frozen=True)
class FresnelTail:
    lam: float
    value: complex


def _airy_series(x: float) -> tuple[float, float]:
    """Maclaurin series of the standard Airy function: Ai, Ai'."""
    # Ai(x) = Ai(0)*f(x) + Ai'(0)*g(x) with
    # f = sum 3^k (1/3)_k x^{3k}/(3k)!,  g = sum 3^k (2/3)_k x^{3k+1}/(3k+1)!
    ld = np.longdouble  # extended precision against e^{2 zeta} cancellation
    x = ld(x)
    f = ld(1.0)
    fp = ld(0.0)
    g = x
    gp = ld(1.0)
    tf = ld(1.0)
    tg = x
    x3 = x * x * x
    for k in range(1, 120):
        n = 3 * k
        tf *= x3 / ld(n * (n - 1))
        tg *= x3 / ld(n * (n + 1))
        f += tf
        g += tg
        if x != 0.0:
            fp += tf * n / x
            gp += tg * (n + 1) / x
        if abs(tf) + abs(tg) < ld(1e-22) * (abs(f) + abs(g) + 1.0):
            break
    ai = _AI0_LD * f + _AIP0_LD * g
    aip = _AI0_LD * fp + _AIP0_LD * gp
    return float(ai), float(aip)


def _asym_u_v(nterms: int) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients u_k, v_k of the standard Airy asymptotic expansions."""
    u = np.empty(nterms)
    v = np.empty(nterms)
    u[0] = 1.0
    v[0] = 1.0
    for k in range(1, nterms):
        # u_k = u_{k-1} * (6k-5)(6k-1) / (72 k)
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 1) / (72.0 * k)
        v[k] = u[k] * (6 * k + 1) / (1.0 - 6 * k)
    return u, v


_U, _V = _asym_u_v(16)


def _airy_asym_pos(x: float) -> tuple[float, float]:
    """Standard Airy Ai, Ai' for large positive x (DLMF 9.7.5/9.7.6)."""
    zeta = (2.0 / 3.0) * x ** 1.5
    su = 0.0
    sv = 0.0
    prev = math.inf
    for k in range(len(_U)):
        tu = _U[k] / zeta ** k
        if abs(tu) > prev:
            break  # divergent tail of the asymptotic series
        prev = abs(tu)
        su += (-1) ** k * tu
        sv += (-1) ** k * _V[k] / zeta ** k
        if abs(tu) < 1e-18:
            break
    pref = math.exp(-zeta) / (2.0 * math.sqrt(math.pi) * x ** 0.25)
    ai = pref * su
    aip = -(x ** 0.25) * math.exp(-zeta) / (2.0 * math.sqrt(math.pi)) * sv
    return ai, aip


def _airy_asym_neg(x: float) -> tuple[float, float]:
    """Standard Airy Ai, Ai' at -x for large x > 0 (DLMF 9.7.9/9.7.10)."""
    zeta = (2.0 / 3.0) * x ** 1.5
    c = math.cos(zeta - math.pi / 4.0)
    s = math.sin(zeta - math.pi / 4.0)
    even_u = odd_u = even_v = odd_v = 0.0
    for k in range(0, len(_U) // 2):
        even_u += (-1) ** k * _U[2 * k] * zeta ** (-2 * k)
        odd_u += (-1) ** k * _U[2 * k + 1] * zeta ** (-2 * k - 1)
        even_v += (-1) ** k * _V[2 * k] * zeta ** (-2 * k)
        odd_v += (-1) ** k * _V[2 * k + 1] * zeta ** (-2 * k - 1)
    ai = (c * even_u + s * odd_u) / (math.sqrt(math.pi) * x ** 0.25)
    aip = (x ** 0.25 / math.sqrt(math.pi)) * (s * even_v - c * odd_v)
    return ai, aip


def _airy_std(x: float) -> tuple[float, float]:
    if -_SERIES_CUT_NEG <= x <= _SERIES_CUT_POS:
        return _airy_series(x)
    if x > 0:
        return _airy_asym_pos(x)
    return _airy_asym_neg(-x)


def airy(y: float) -> AiryValue:
    """Rescaled-convention Airy value and derivative at y; |y| <= 40."""
    y = float(y)
    if abs(y) > 40.0:
        raise ValueError(f"airy argument out of range: |{y}| > 40")
    x = y / _CBRT3
    ai, aip = _airy_std(x)
    return AiryValue(y=y, ai=ai / _CBRT3, ai_prime=aip / _CBRT3 ** 2)


def airy_asym(y: float, side: int) -> float:
    """Leading-order asymptotic model of the rescaled-convention Airy function.

    side=+1: decaying exponential for y -> +infinity; side=-1: cosine form
    for y -> -infinity.  The + side prefactor carries the factor 1/2 required
    by the defining integral (leading-order displays sometimes omit it); the
    package fits and reports this empirically rather than asserting a printed
    constant.
    """
    y = float(y)
    if abs(y) < 5.0:
        raise ValueError("airy_asym requires |y| >= 5")
    if side > 0:
        if y < 0:
            raise ValueError("side=+1 requires y > 0")
        return math.exp(-(2.0 / (3.0 * math.sqrt(3.0))) * y ** 1.5) / (
            2.0 * math.sqrt(math.pi) * (3.0 * y) ** 0.25
        )
    if y > 0:
        raise ValueError("side=-1 requires y < 0")
    ay = abs(y)
    phase = (2.0 / (3.0 * math.sqrt(3.0))) * ay ** 1.5 - math.pi / 4.0
    return math.cos(phase) / (math.sqrt(math.pi) * (3.0 * ay) ** 0.25)


_SQRT_PI_2 = math.sqrt(math.pi) / 2.0
_E_IPI4 = complex(math.cos(math.pi / 4.0), math.sin(math.pi / 4.0))


def fresnel_tail(lam: float) -> FresnelTail:
    """int_lambda^infty e^{i eta^2} d eta via standard Fresnel integrals."""
    lam = float(lam)
    if lam < 0:
        raise ValueError("fresnel_tail requires lambda >= 0")
    u = lam * math.sqrt(2.0 / math.pi)
    s, c = _std_fresnel(u)
    value = math.sqrt(math.pi / 2.0) * complex(0.5 - c, 0.5 - s)
    return FresnelTail(lam=lam, value=value)
