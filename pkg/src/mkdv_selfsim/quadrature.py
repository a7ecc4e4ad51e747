"""Oscillatory panel quadrature for cubic polynomial phases.

Evaluates integrals of the form

    int_a^b  amp(x) * exp(i q(x)) dx,       q(x) = q0 + q1 x + q2 x^2 + q3 x^3,

where amp may carry inverse-square-root singularities and jump points.  Two
paths:

* a direct path (slow phase): oscillation-resolved Gauss panels, with an
  x = x0 + s^2 substitution around each square-root singularity;
* a chart path (fast phase): the axis is split at the stationary points of q
  (and at singular/jump points); on each monotone piece the substitution
  q(x) = q(anchor) +/- t^2 (anchor = adjacent stationary or singular point)
  or u = q(x) renders the phase exactly quadratic or linear, and the smooth
  transplanted amplitude is integrated by adaptive Filon panels whose moments
  are computed in closed form (complex-erf Fresnel moments / linear-phase
  recurrences).  Panels are sized by amplitude variation only, so the cost is
  independent of how fast the phase oscillates.

Analytic tail models (iterated integration by parts, and incomplete-gamma
power tails for quadratic phases) complement domain truncation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.special import wofz

__all__ = [
    "QuadPanelConfig",
    "osc_cubic",
    "cfresnel_segment",
    "ibp_tail",
    "power_tail_quadratic",
    "poly_eval",
    "poly_deriv",
    "poly_compose_linear",
]


@dataclass(frozen=True)
class QuadPanelConfig:
    tol: float = 1e-10       # target absolute tolerance per call
    max_panels: int = 200000
    radius: float = 300.0    # truncation radius for infinite domains
    tail_terms: int = 3      # depth of integration-by-parts tail expansions

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.radius <= 0:
            raise ValueError("radius must be positive")


# ---------------------------------------------------------------------------
# polynomial helpers (coefficients low-to-high order)


def poly_eval(coeffs, x):
    out = np.zeros_like(np.asarray(x, dtype=float), dtype=float) + coeffs[-1]
    for c in coeffs[-2::-1]:
        out = out * x + c
    return out


def poly_deriv(coeffs):
    return tuple((k + 1) * c for k, c in enumerate(coeffs[1:]))


def poly_compose_linear(coeffs, s, d):
    """Coefficients of q(s*x + d) for cubic (or lower) q."""
    c = list(coeffs) + [0.0] * (4 - len(coeffs))
    q0, q1, q2, q3 = c
    return (
        q0 + q1 * d + q2 * d * d + q3 * d**3,
        q1 * s + 2 * q2 * s * d + 3 * q3 * s * d * d,
        q2 * s * s + 3 * q3 * s * s * d,
        q3 * s**3,
    )


def _stationary_points(coeffs, lo, hi):
    c = list(coeffs) + [0.0] * (4 - len(coeffs))
    _, q1, q2, q3 = c
    span = hi - lo
    scale = max(abs(q1), abs(q2) * span, abs(q3) * span * span, 1e-300)
    pts = []
    if abs(q3) * span * span > 1e-13 * scale:
        disc = 4 * q2 * q2 - 12 * q3 * q1
        if disc >= 0:
            r = math.sqrt(disc)
            pts = [(-2 * q2 - r) / (6 * q3), (-2 * q2 + r) / (6 * q3)]
    elif abs(q2) * span > 1e-13 * scale:
        pts = [-q1 / (2 * q2)]
    return sorted(p for p in pts if lo < p < hi)


# ---------------------------------------------------------------------------
# closed-form oscillatory moments


_SQRT_PI = math.sqrt(math.pi)


def _erf_quadphase(x: np.ndarray, alpha: float) -> np.ndarray:
    """erf(sqrt(-i alpha) x) for alpha > 0, real x, stable for large |x|."""
    ax = np.abs(x)
    z_arg = math.sqrt(alpha) * ax  # |z|, direction e^{-i pi/4}
    # erf(z) = 1 - exp(-z^2) wofz(iz); iz = e^{i pi/4} sqrt(alpha)|x| (upper hp)
    iz = z_arg * complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
    val = 1.0 - np.exp(1j * alpha * ax * ax) * wofz(iz)
    return np.where(x >= 0, val, -val)


def cfresnel_segment(a: float, b: float, alpha: float) -> complex:
    """int_a^b exp(i alpha x^2) dx by complex error functions."""
    if alpha == 0.0:
        return complex(b - a)
    if alpha < 0:
        return complex(np.conjugate(cfresnel_segment(a, b, -alpha)))
    c = _SQRT_PI * cmath.exp(1j * math.pi / 4) / (2.0 * math.sqrt(alpha))
    e = _erf_quadphase(np.array([a, b]), alpha)
    return complex(c * (e[1] - e[0]))


def _lin_moments(omega: float, n: int) -> np.ndarray:
    """M_k = int_{-1}^1 x^k e^{i omega x} dx, stable for |omega| >~ n."""
    iw = 1j * omega
    e1 = cmath.exp(iw)
    e0 = cmath.exp(-iw)
    M = np.empty(n, dtype=complex)
    M[0] = (e1 - e0) / iw
    for k in range(1, n):
        M[k] = (e1 - (-1) ** k * e0) / iw - (k / iw) * M[k - 1]
    return M


def _quad_moments(alpha: float, beta: float, n: int) -> np.ndarray:
    """M_k = int_{-1}^1 x^k e^{i(alpha x^2 + beta x)} dx; needs |alpha| >~ 1."""
    c = beta / (2.0 * alpha)
    A, B = -1.0 + c, 1.0 + c
    ia2 = 2j * alpha
    G = np.empty(n, dtype=complex)
    G[0] = cfresnel_segment(A, B, alpha)
    eB = cmath.exp(1j * alpha * B * B)
    eA = cmath.exp(1j * alpha * A * A)
    if n > 1:
        G[1] = (eB - eA) / ia2
    for j in range(2, n):
        G[j] = ((B ** (j - 1)) * eB - (A ** (j - 1)) * eA - (j - 1) * G[j - 2]) / ia2
    phase = cmath.exp(-1j * alpha * c * c)
    M = np.empty(n, dtype=complex)
    binom = np.zeros((n, n))
    binom[0, 0] = 1.0
    for k in range(1, n):
        binom[k, 0] = 1.0
        binom[k, 1:] = binom[k - 1, 1:] + binom[k - 1, :-1]
    for k in range(n):
        acc = 0.0 + 0.0j
        for j in range(k + 1):
            acc += binom[k, j] * ((-c) ** (k - j)) * G[j]
        M[k] = phase * acc
    return M


# ---------------------------------------------------------------------------
# adaptive Filon driver on transplanted (quadratic / linear phase) axes


_NFIT = 11  # Chebyshev interpolation nodes per panel (degree 10)
_CHEB_X = np.cos((2 * np.arange(_NFIT) + 1) * math.pi / (2 * _NFIT))[::-1].copy()
_G8 = np.polynomial.legendre.leggauss(8)
_G16 = np.polynomial.legendre.leggauss(16)


def _gauss_embedded(fvals_hi, fvals_lo, hw):
    hi = hw * np.sum(_G16[1] * fvals_hi)
    lo = hw * np.sum(_G8[1] * fvals_lo)
    return hi, abs(hi - lo)


# precomputed linear maps: node values -> Chebyshev coeffs -> monomial coeffs
_FIT_INV = np.linalg.inv(np.polynomial.chebyshev.chebvander(_CHEB_X, _NFIT - 1))
_C2P_MAT = np.zeros((_NFIT, _NFIT))
for _k in range(_NFIT):
    _m = np.polynomial.chebyshev.cheb2poly(np.eye(_NFIT)[_k])
    _C2P_MAT[: len(_m), _k] = _m
_FIT_TAIL = _FIT_INV[-2:]  # last two Chebyshev coefficients (error estimate)
_FIT_MONO = _C2P_MAT @ _FIT_INV


def _fit_panel(vals):
    """Monomial coefficients and |tail| estimate from _CHEB_X node values."""
    mono = _FIT_MONO @ vals
    t = _FIT_TAIL @ vals
    return mono, abs(t[1]) + abs(t[0])


def _panel_quad(ampf, t0, t1, sigma):
    """One Filon panel of int_{t0}^{t1} ampf(t) e^{i sigma t^2} dt.

    Returns (value, err_estimate) or (None, None) to request a bisection.
    """
    tm = 0.5 * (t0 + t1)
    hw = 0.5 * (t1 - t0)
    alpha = sigma * hw * hw
    beta = 2.0 * sigma * tm * hw
    if abs(alpha) + abs(beta) <= 12.0:
        thi = tm + hw * _G16[0]
        tlo = tm + hw * _G8[0]
        v, e = _gauss_embedded(
            ampf(thi) * np.exp(1j * sigma * thi * thi),
            ampf(tlo) * np.exp(1j * sigma * tlo * tlo),
            hw,
        )
        return v, e
    gamma0 = sigma * tm * tm
    if abs(alpha) <= 1.0:
        xl = _CHEB_X
        vals = ampf(tm + hw * xl) * np.exp(1j * alpha * xl * xl)
        mono, tail = _fit_panel(vals)
        M = _lin_moments(beta, _NFIT)
        val = hw * cmath.exp(1j * gamma0) * np.dot(mono, M)
        # truncated-coefficient error scaled by the moment mass ~ 4/|beta|
        mass = min(2.0, 4.0 / abs(beta))
        err = tail * hw * mass
        return val, err
    if abs(tm) <= 2.0 * hw:
        xl = _CHEB_X
        vals = ampf(tm + hw * xl)
        mono, tail = _fit_panel(vals)
        M = _quad_moments(alpha, beta, _NFIT)
        val = hw * cmath.exp(1j * gamma0) * np.dot(mono, M)
        # stationary-phase moment mass ~ sqrt(pi/|alpha|)
        mass = min(2.0, 2.0 / math.sqrt(abs(alpha)))
        err = tail * hw * mass
        return val, err
    return None, None


def _panel_lin(ampf, u0, u1):
    um = 0.5 * (u0 + u1)
    hu = 0.5 * (u1 - u0)
    if hu <= 12.0:
        uhi = um + hu * _G16[0]
        ulo = um + hu * _G8[0]
        v, e = _gauss_embedded(
            ampf(uhi) * np.exp(1j * uhi), ampf(ulo) * np.exp(1j * ulo), hu
        )
        return v, e
    xl = _CHEB_X
    vals = ampf(um + hu * xl)
    mono, tail = _fit_panel(vals)
    M = _lin_moments(hu, _NFIT)
    val = hu * cmath.exp(1j * um) * np.dot(mono, M)
    err = tail * hu * min(2.0, 4.0 / hu)
    return val, err


class _PanelBudget:
    def __init__(self, max_panels):
        self.left = max_panels

    def take(self):
        self.left -= 1
        if self.left < 0:
            raise RuntimeError("oscillatory quadrature panel budget exhausted")


def _adaptive(panel_fn, lo, hi, tol, budget, max_depth=52):
    total = 0.0 + 0.0j
    err = 0.0
    span = hi - lo
    if span <= 0:
        return total, err
    stack = [(lo, hi, 0)]
    while stack:
        p, r, d = stack.pop()
        budget.take()
        val, e = panel_fn(p, r)
        tol_here = tol * max((r - p) / span, 1.0 / 512.0)
        if val is None or (
            e > tol_here and d < max_depth and (r - p) > 1e-13 * (1.0 + abs(p) + abs(r))
        ):
            m = 0.5 * (p + r)
            stack.append((p, m, d + 1))
            stack.append((m, r, d + 1))
        else:
            total += val
            err += e
    return total, err


# ---------------------------------------------------------------------------
# monotone inversion of the phase polynomial


def _invert_monotone(coeffs, lo, hi, targets):
    a = np.full(np.shape(targets), lo, dtype=float)
    b = np.full(np.shape(targets), hi, dtype=float)
    increasing = poly_eval(coeffs, hi) >= poly_eval(coeffs, lo)
    for _ in range(54):
        m = 0.5 * (a + b)
        qm = poly_eval(coeffs, m)
        take_right = (qm < targets) if increasing else (qm > targets)
        a = np.where(take_right, m, a)
        b = np.where(take_right, b, m)
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# chart-path segment integrators


def _segment_anchor(coeffs, dcoeffs, amp, anchor, far, tol, budget):
    """int over the monotone stretch between anchor and far, phase-charted.

    anchor is a stationary or singular abscissa at one end; substitution
    q(x) = q(anchor) + sig t^2 gives exact quadratic phase.  Returns the
    SIGNED integral int_min^max amp e^{iq} dx.

    The inversion works in the offset delta = |x - anchor| using the exact
    expansion q(anchor + dirn*delta) - q(anchor) = A1 d + A2 d^2 + A3 d^3,
    which is free of the catastrophic cancellation that evaluating
    q(x) - qhat directly suffers for small t.
    """
    qhat = float(poly_eval(coeffs, anchor))
    dirn = 1.0 if far > anchor else -1.0
    L = abs(far - anchor)
    # exact offset expansion coefficients for a cubic q
    q3 = coeffs[3] if len(coeffs) > 3 else 0.0
    A1 = float(poly_eval(dcoeffs, anchor)) * dirn
    A2 = coeffs[2] + 3.0 * q3 * anchor  # q''(anchor)/2
    A3 = q3 * dirn
    hofd = lambda d: d * (A1 + d * (A2 + d * A3))
    dhofd = lambda d: A1 + d * (2.0 * A2 + d * 3.0 * A3)
    dq_far = hofd(L)
    if dq_far == 0.0:
        return 0.0 + 0.0j, 0.0
    sig = 1.0 if dq_far > 0 else -1.0
    T = math.sqrt(abs(dq_far))
    # smallest representable offset from the anchor abscissa
    dmin = 4.0 * np.finfo(float).eps * (1.0 + abs(anchor))

    def ampt(t):
        tgt = sig * t * t
        a = np.zeros(np.shape(t))
        b = np.full(np.shape(t), L)
        inc = sig > 0  # h monotone from 0 to dq_far
        for _ in range(22):
            m = 0.5 * (a + b)
            hm = hofd(m)
            take_right = (hm < tgt) if inc else (hm > tgt)
            a = np.where(take_right, m, a)
            b = np.where(take_right, b, m)
        d = 0.5 * (a + b)
        # Newton polish (monotone h, so the bracket seed is safe)
        for _ in range(3):
            hp = dhofd(d)
            hp = np.where(np.abs(hp) > 1e-300, hp, 1e-300)
            d = np.clip(d - (hofd(d) - tgt) / hp, 0.0, L)
        dddt = 2.0 * sig * t / dhofd(d)
        x = anchor + dirn * np.maximum(d, dmin)
        return amp(x) * dirn * dddt

    val, err = _adaptive(
        lambda p, r: _panel_quad(ampt, p, r, sig), 0.0, T, tol, budget
    )
    phase = cmath.exp(1j * qhat)
    signed = val * phase
    if anchor > far:  # we integrated from the right end leftward
        signed = -signed
    return signed, err


def _segment_linear(coeffs, dcoeffs, amp, p, r, tol, budget):
    up = float(poly_eval(coeffs, p))
    ur = float(poly_eval(coeffs, r))
    s = 1.0 if ur >= up else -1.0
    ulo, uhi = min(up, ur), max(up, ur)

    def ampu(u):
        x = _invert_monotone(coeffs, p, r, u)
        dq = poly_eval(dcoeffs, x)
        return amp(x) / dq

    val, err = _adaptive(lambda a, b: _panel_lin(ampu, a, b), ulo, uhi, tol, budget)
    return s * val, err


# ---------------------------------------------------------------------------
# direct (slow-phase) path


def _gauss_direct(coeffs, dcoeffs, amp, a, b, tol, budget, base_scale):
    """Oscillation-resolved Gauss panels; assumes no singularities inside."""
    if b <= a:
        return 0.0 + 0.0j, 0.0
    ns = max(64, min(4000, int(40 * (b - a) / base_scale)))
    xs = np.linspace(a, b, ns)
    dens = np.abs(poly_eval(dcoeffs, xs)) + 2.0 * math.pi / base_scale
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(xs))])
    npan = max(1, int(cum[-1] / 3.0) + 1)
    marks = np.interp(np.linspace(0.0, cum[-1], npan + 1), cum, xs)
    total = 0.0 + 0.0j
    err = 0.0
    nodes, weights = _G16
    lo_nodes, lo_w = _G8
    for p, r in zip(marks[:-1], marks[1:]):
        budget.take()
        hw = 0.5 * (r - p)
        mid = 0.5 * (p + r)
        t = mid + hw * nodes
        f = amp(t) * np.exp(1j * poly_eval(coeffs, t))
        tl = mid + hw * lo_nodes
        fl = amp(tl) * np.exp(1j * poly_eval(coeffs, tl))
        v, e = _gauss_embedded(f, fl, hw)
        total += v
        err += e
    return total, err


def _gauss_sqrt_sub(coeffs, dcoeffs, amp, x0, delta, side, tol, budget, base_scale):
    """int over (x0, x0+delta] (side=+1) or [x0-delta, x0) via x = x0 + side s^2."""
    smax = math.sqrt(delta)

    def ampl(s):
        x = x0 + side * s * s
        return amp(x) * 2.0 * s * np.exp(1j * poly_eval(coeffs, x))

    # phase in s is slow here by construction; resolve with plain panels
    ns = 400
    ss = np.linspace(0.0, smax, ns)
    xs = x0 + side * ss * ss
    dens = np.abs(poly_eval(dcoeffs, xs) * 2.0 * ss) + 2.0 * math.pi / max(
        0.2, min(base_scale, smax)
    )
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(ss))])
    npan = max(1, int(cum[-1] / 3.0) + 1)
    marks = np.interp(np.linspace(0.0, cum[-1], npan + 1), cum, ss)
    total = 0.0 + 0.0j
    err = 0.0
    for p, r in zip(marks[:-1], marks[1:]):
        budget.take()
        hw = 0.5 * (r - p)
        mid = 0.5 * (p + r)
        v, e = _gauss_embedded(ampl(mid + hw * _G16[0]), ampl(mid + hw * _G8[0]), hw)
        total += v
        err += e
    # both orientations reduce to int_0^{smax} f(x0 +/- s^2) 2s ds, no sign flip
    return total, err


_PHASE_DIRECT_THRESHOLD = 400.0  # radians; below this use the direct path
_SEGMENT_GAUSS_THRESHOLD = 60.0  # radians of phase across one chart segment


def osc_cubic(
    coeffs,
    amp,
    a: float,
    b: float,
    *,
    sqrt_sings=(),
    jumps=(),
    tol: float = 1e-10,
    base_scale: float = 1.0,
    max_panels: int = 200000,
) -> complex:
    """int_a^b amp(x) exp(i q(x)) dx for cubic polynomial phase q."""
    if b <= a:
        return 0.0 + 0.0j
    coeffs = tuple(float(c) for c in coeffs) + (0.0,) * (4 - len(coeffs))
    dcoeffs = poly_deriv(coeffs)
    budget = _PanelBudget(max_panels)
    sings = sorted(x for x in sqrt_sings if a < x < b or x in (a, b))
    cuts = sorted(
        set([a, b])
        | {x for x in jumps if a < x < b}
        | {x for x in sings if a < x < b}
        | set(_stationary_points(coeffs, a, b))
    )

    # total phase variation decides the path
    xs = np.linspace(a, b, 400)
    phase_var = float(np.trapezoid(np.abs(poly_eval(dcoeffs, xs)), xs))

    total = 0.0 + 0.0j

    def integrate_plain(p, r):
        """Piece with no interior singularity; endpoints may be singular."""
        nonlocal total
        # handle sqrt singularity at either endpoint with the s^2 substitution
        left_sing = p in sings
        right_sing = r in sings
        pp, rr = p, r
        if left_sing:
            delta = min(1.0, (r - p) * 0.5)
            v, _ = _gauss_sqrt_sub(
                coeffs, dcoeffs, amp, p, delta, +1, tol, budget, base_scale
            )
            total += v
            pp = p + delta
        if right_sing:
            delta = min(1.0, (rr - pp) * 0.5) if rr - pp > 0 else 0.0
            if delta > 0:
                v, _ = _gauss_sqrt_sub(
                    coeffs, dcoeffs, amp, r, delta, -1, tol, budget, base_scale
                )
                total += v
                rr = r - delta
        if rr > pp:
            v, _ = _gauss_direct(coeffs, dcoeffs, amp, pp, rr, tol, budget, base_scale)
            total += v

    if phase_var < _PHASE_DIRECT_THRESHOLD:
        for p, r in zip(cuts[:-1], cuts[1:]):
            integrate_plain(p, r)
        return total

    # chart path
    stat_set = set(_stationary_points(coeffs, a, b))
    for p, r in zip(cuts[:-1], cuts[1:]):
        dq_seg = abs(poly_eval(coeffs, r) - poly_eval(coeffs, p))
        if dq_seg < _SEGMENT_GAUSS_THRESHOLD:
            integrate_plain(p, r)
            continue
        p_anchor = p in stat_set or p in sings
        r_anchor = r in stat_set or r in sings
        if p_anchor and r_anchor:
            # split at the phase midpoint so each half has one anchor
            mid_target = 0.5 * (poly_eval(coeffs, p) + poly_eval(coeffs, r))
            m = float(_invert_monotone(coeffs, p, r, np.array(mid_target)))
            v1, _ = _segment_anchor(coeffs, dcoeffs, amp, p, m, tol, budget)
            v2, _ = _segment_anchor(coeffs, dcoeffs, amp, r, m, tol, budget)
            total += v1 + v2
        elif p_anchor:
            v, _ = _segment_anchor(coeffs, dcoeffs, amp, p, r, tol, budget)
            total += v
        elif r_anchor:
            v, _ = _segment_anchor(coeffs, dcoeffs, amp, r, p, tol, budget)
            total += v
        else:
            v, _ = _segment_linear(coeffs, dcoeffs, amp, p, r, tol, budget)
            total += v
    return total


# ---------------------------------------------------------------------------
# analytic tails


def ibp_tail(coeffs, amp, R: float, *, terms: int = 3, direction: int = +1) -> complex:
    """int_R^{+inf} (direction=+1) or int_{-inf}^{-R} (direction=-1) of
    amp(x) e^{i q(x)} dx by iterated integration by parts.

    Valid when |q'| is large and monotone-ish beyond R and amp decays (or is
    bounded with decaying amp/q').  Derivatives of amp are taken numerically.
    """
    if direction < 0:
        refl = tuple(c * ((-1) ** k) for k, c in enumerate(coeffs))
        return complex(
            ibp_tail(refl, lambda x: amp(-x), R, terms=terms, direction=+1)
        )
    dcoeffs = poly_deriv(coeffs)
    h = 1e-4 * (1.0 + abs(R))

    def u_over(u, x):
        return u(x) / (1j * poly_eval(dcoeffs, x))

    u_funcs = [lambda x: np.asarray(amp(x), dtype=complex)]
    for _ in range(terms - 1):
        prev = u_funcs[-1]
        u_funcs.append(
            lambda x, prev=prev: (u_over(prev, x + h) - u_over(prev, x - h)) / (2 * h)
        )
    total = 0.0 + 0.0j
    sgn = 1.0
    qR = float(poly_eval(coeffs, R))
    dqR = float(poly_eval(dcoeffs, R))
    for u in u_funcs:
        total += sgn * complex(u(np.array(R)))
        sgn = -sgn
    return -cmath.exp(1j * qR) * total / (1j * dqR)


def power_tail_quadratic(lam: float, c: complex, q: complex, R: float) -> complex:
    """int_R^inf  c * (x/R)^(-q) * exp(i lam x^2) dx.

    lam = 0 requires Re q > 1 (pure power integral).  Otherwise evaluated via
    the upper incomplete gamma function with complex argument.
    """
    if c == 0:
        return 0.0 + 0.0j
    if lam == 0.0:
        if q.real <= 1.0:
            raise ValueError("non-convergent power tail (Re q <= 1, no phase)")
        return c * R / (q - 1.0)
    s = (q + 1.0) / 2.0
    # int_R^inf x^{-q} e^{i lam x^2} dx = (1/2) (-i lam)^{s-1} Gamma(1-s, -i lam R^2)
    a = complex(1.0) - s
    zarg = -1j * lam * R * R
    g = mpmath.gammainc(mpmath.mpc(a), mpmath.mpc(zarg))
    val = 0.5 * complex((-1j * lam) ** (s - 1.0)) * complex(g)
    return c * (R**q) * val
