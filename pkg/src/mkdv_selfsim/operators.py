"""The bilinear kernel K, the oscillatory pairing J, and the trilinear form I.

Conventions (Fourier side, all fields conjugate-symmetric in applications):

    K(f, g)(eta) = int_R  e^{(3i/4) eta nu^2} f((eta+nu)/2) g((eta-nu)/2) dnu,
    J(f, g)(xi)  = int_R  e^{-3i Phi(xi, eta)} conj(f)(eta - xi) g(eta) deta,
    I(f, g, h)   = (1/2) J(h, K(f, g)),

with Phi(xi, eta) = eta xi^2 - xi eta^2 + eta^3/4.  K is symmetric in (f, g)
(substitute nu -> -nu) and behaves like sigma_pm / sqrt|eta| near eta = 0;
J's phase is stationary in eta at 2 xi and 2 xi/3.

``K_eval`` evaluates K at one point by oscillation-aware quadrature in the
rescaled variable mu = sqrt|eta| nu (quadratic phase (3/4) sgn(eta) mu^2).
``TabulatedK`` stores W(s) = sqrt|eta| K(eta) on an s = sqrt|eta| grid per
sign branch (W is smooth through eta = 0), with a fitted complex-power tail
beyond the grid; it is what J integrates against.  ``J_eval`` supports a
brute quadrature mode and a fast asymptotic mode (the two stationary values,
coefficient sqrt(2 pi / 3|xi|) each, plus the origin contribution generated
by K's inverse-square-root singularity).
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.interpolate import CubicSpline

from .phase import PhasePoly
from .quadrature import (
    QuadPanelConfig,
    ibp_tail,
    osc_cubic,
    power_tail_quadratic,
)

__all__ = ["K_eval", "TabulatedK", "tabulate_K", "J_eval", "I_eval", "clear_k_cache"]

_PHASE = PhasePoly()


# ---------------------------------------------------------------------------
# K: pointwise evaluation


def _fitted_power_tail(amp_side, lam: float, R: float) -> complex:
    """int_R^inf amp_side(x) e^{i lam x^2} dx with amp_side modelled as a
    complex power c (x/R)^{-q} fitted from two samples."""
    c = complex(amp_side(np.array(R)))
    if abs(c) < 1e-300:
        return 0.0 + 0.0j
    c2 = complex(amp_side(np.array(1.25 * R)))
    if abs(c2) < 1e-300:
        q = 6.0 + 0.0j
    else:
        q = -cmath.log(c2 / c) / math.log(1.25)
        # keep the local fit inside a sane window (ripples can corrupt it)
        q = complex(min(max(q.real, -1.0), 8.0), min(max(q.imag, -8.0), 8.0))
    if lam > 0:
        return power_tail_quadratic(lam, c, q, R)
    return complex(
        np.conjugate(power_tail_quadratic(-lam, np.conjugate(c), np.conjugate(q), R))
    )


def K_eval(f, g, eta: float, cfg: QuadPanelConfig | None = None) -> complex:
    """K(f, g)(eta) for eta != 0 by quadrature in mu = sqrt|eta| nu."""
    cfg = cfg or QuadPanelConfig()
    eta = float(eta)
    if eta == 0.0:
        raise ValueError("K_eval requires eta != 0")
    ae = abs(eta)
    sa = math.sqrt(ae)
    sgn = 1.0 if eta > 0 else -1.0
    lam = 0.75 * sgn

    def amp(mu):
        nu = np.asarray(mu, dtype=float) / sa
        return f((eta + nu) / 2.0) * g((eta - nu) / 2.0) / sa

    # truncation: field features (argument zero crossings, cutoff region) sit
    # at |nu| <~ |eta| + O(1), i.e. |mu| <~ |eta|^{3/2}; go comfortably past
    R = max(40.0, 2.2 * ae**1.5)
    coeffs = (0.0, 0.0, lam, 0.0)
    jumps = sorted({-eta * sa, eta * sa})
    core = osc_cubic(
        coeffs,
        amp,
        -R,
        R,
        jumps=[j for j in jumps if -R < j < R],
        tol=cfg.tol,
        base_scale=max(1.0, sa),
        max_panels=cfg.max_panels,
    )
    right = _fitted_power_tail(amp, lam, R)
    left = _fitted_power_tail(lambda x: amp(-np.asarray(x, dtype=float)), lam, R)
    return complex(core + right + left)


# ---------------------------------------------------------------------------
# K: batch evaluation (vectorized over eta, fixed panel grids)

_NFIT = 11
_CHEB_T = np.cos((2 * np.arange(_NFIT) + 1) * math.pi / (2 * _NFIT))[::-1].copy()
_FIT_INV = np.linalg.inv(np.polynomial.chebyshev.chebvander(_CHEB_T, _NFIT - 1))
_C2P = np.zeros((_NFIT, _NFIT))
for _k in range(_NFIT):
    _m = np.polynomial.chebyshev.cheb2poly(np.eye(_NFIT)[_k])
    _C2P[: len(_m), _k] = _m
_G16N, _G16W = np.polynomial.legendre.leggauss(16)


def _lin_moments_vec(beta: float) -> np.ndarray:
    from .quadrature import _lin_moments

    return _lin_moments(beta, _NFIT)


def _panel_batch(ampf, lam: float, t0: float, t1: float, tol: float, depth: int = 0):
    """int_{t0}^{t1} ampf(t)[:, j] e^{i lam t^2} dt for a batch of amplitudes.

    ampf maps a node vector (m,) to an array (n_eta, m).  Splits itself when
    the Chebyshev tail of any amplitude row is above tol.
    """
    tm = 0.5 * (t0 + t1)
    hw = 0.5 * (t1 - t0)
    alpha = lam * hw * hw
    beta = 2.0 * lam * tm * hw
    if abs(alpha) + abs(beta) <= 12.0:
        x = tm + hw * _G16N
        vals = ampf(x) * np.exp(1j * lam * x * x)
        return hw * vals @ _G16W
    # Filon: absorb the (small) quadratic part into the fitted amplitude
    x = tm + hw * _CHEB_T
    vals = ampf(x) * np.exp(1j * alpha * _CHEB_T * _CHEB_T)
    cheb = vals @ _FIT_INV.T
    tail = np.abs(cheb[:, -1]) + np.abs(cheb[:, -2])
    mass = min(2.0, 4.0 / max(abs(beta), 1e-30))
    if depth < 28 and np.max(tail) * hw * mass > tol:
        return _panel_batch(ampf, lam, t0, tm, tol, depth + 1) + _panel_batch(
            ampf, lam, tm, t1, tol, depth + 1
        )
    mono = cheb @ _C2P.T
    M = _lin_moments_vec(beta)
    return hw * cmath.exp(1j * lam * tm * tm) * (mono @ M)


def _field_2d(fld, x2d):
    """Evaluate a field callable on a 2-D argument via ravel/reshape."""
    return np.asarray(fld(x2d.ravel()), dtype=complex).reshape(x2d.shape)


def _k_batch(f, g, etas, cfg: QuadPanelConfig, k_tol: float = 1e-8) -> np.ndarray:
    """K(f, g) on an array of same-sign etas, vectorized panel quadrature."""
    etas = np.asarray(etas, dtype=float)
    out = np.empty(etas.shape, dtype=complex)
    ae_all = np.abs(etas)
    sgn = 1.0 if etas.flat[0] > 0 else -1.0
    small = ae_all <= 0.5

    # --- small |eta|: integrate in nu (slow quadratic phase 0.75 eta nu^2)
    if np.any(small):
        eta_s = etas[small][:, None]
        R = 44.0

        def amp_nu(nu):
            nu = np.asarray(nu, dtype=float)[None, :]
            return _field_2d(f, (eta_s + nu) / 2.0) * _field_2d(g, (eta_s - nu) / 2.0)

        # panels sized by the field variation scale (~0.4 near the cutoffs)
        edges = np.concatenate([-np.arange(0.0, R, 0.4)[::-1], np.arange(0.4, R + 0.4, 0.4)])
        edges[0], edges[-1] = -R, R
        acc = np.zeros(eta_s.shape[0], dtype=complex)
        # the phase 0.75 eta nu^2 differs per eta but is slow (|lam| <= 0.375),
        # so fold it exactly into the amplitude and use plain Gauss panels
        for p, r in zip(edges[:-1], edges[1:]):
            hw = 0.5 * (r - p)
            mid = 0.5 * (p + r)
            x = mid + hw * _G16N
            ph = np.exp(0.75j * etas[small][:, None] * (x * x)[None, :])
            acc += hw * (amp_nu(x) * ph) @ _G16W
        # power tails in nu beyond R, per eta
        for i, eta in enumerate(etas[small]):
            lam = 0.75 * eta

            def a_right(x, eta=eta):
                x = np.asarray(x, dtype=float)
                return f((eta + x) / 2.0) * g((eta - x) / 2.0)

            acc[i] += _fitted_power_tail(a_right, lam, R)
            acc[i] += _fitted_power_tail(
                lambda x, eta=eta: np.asarray(
                    f((eta - np.asarray(x, dtype=float)) / 2.0)
                    * g((eta + np.asarray(x, dtype=float)) / 2.0)
                ),
                lam,
                R,
            )
        out[small] = acc

    # --- larger |eta|: mu = sqrt|eta| nu, octave groups, shared panel grid
    big_idx = np.nonzero(~small)[0]
    if big_idx.size:
        ae_big = ae_all[big_idx]
        order = np.argsort(ae_big)
        lam = 0.75 * sgn
        pos = 0
        while pos < order.size:
            lo_ae = ae_big[order[pos]]
            grp = [order[pos]]
            pos += 1
            while pos < order.size and ae_big[order[pos]] <= 2.0 * lo_ae:
                grp.append(order[pos])
                pos += 1
            grp = np.array(grp)
            ae = ae_big[grp][:, None]
            sa = np.sqrt(ae)
            eta_g = sgn * ae
            R = max(40.0, 2.2 * float(np.max(ae)) ** 1.5)
            width = min(2.2, max(0.4 * math.sqrt(lo_ae), 0.02))

            def amp_mu(mu):
                nu = np.asarray(mu, dtype=float)[None, :] / sa
                return (
                    _field_2d(f, (eta_g + nu) / 2.0)
                    * _field_2d(g, (eta_g - nu) / 2.0)
                    / sa
                )

            n_pan = max(1, int(math.ceil(R / width)))
            edges = np.linspace(0.0, R, n_pan + 1)
            acc = np.zeros(len(grp), dtype=complex)
            for p, r in zip(edges[:-1], edges[1:]):
                acc += _panel_batch(amp_mu, lam, p, r, k_tol)
                acc += _panel_batch(amp_mu, lam, -r, -p, k_tol)
            # power tails in mu beyond +-R, per eta
            for j, idx in enumerate(grp):
                eta = float(eta_g[j, 0])
                saj = float(sa[j, 0])

                def a_side(x, eta=eta, saj=saj, flip=1.0):
                    x = np.asarray(x, dtype=float) * flip
                    nu = x / saj
                    return f((eta + nu) / 2.0) * g((eta - nu) / 2.0) / saj

                acc[j] += _fitted_power_tail(a_side, lam, R)
                acc[j] += _fitted_power_tail(
                    lambda x: a_side(x, flip=-1.0), lam, R
                )
            out[big_idx[grp]] = acc
    return out


# ---------------------------------------------------------------------------
# K: tabulation


class TabulatedK:
    """Callable model of K(f, g) built from pointwise evaluations.

    Stores W_pm(s) = sqrt|eta| K(pm s^2) as cubic splines in s = sqrt|eta|
    on [0, sqrt(eta_max)], a fitted complex-power tail per branch beyond
    eta_max, and the singular coefficients sigma_pm = lim sqrt|eta| K."""

    has_sqrt_sing = True

    def __init__(self, spline_pos, spline_neg, eta_max, tail_pos, tail_neg):
        self._wp = spline_pos
        self._wn = spline_neg
        self.eta_max = float(eta_max)
        self._tail_pos = tail_pos  # (c, q) for K ~ c (eta/eta_max)^{-q}
        self._tail_neg = tail_neg
        self.sigma_plus = complex(spline_pos(0.0))
        self.sigma_minus = complex(spline_neg(0.0))

    def _branch(self, ae, pos: bool):
        sp = self._wp if pos else self._wn
        c, q = self._tail_pos if pos else self._tail_neg
        inner = ae <= self.eta_max
        s = np.sqrt(np.where(inner, ae, 1.0))
        w = np.asarray(sp(s), dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            val_in = np.where(s > 0, w / np.where(s > 0, s, 1.0), 0.0)
        ratio = np.where(inner, 1.0, ae / self.eta_max)
        val_out = c * ratio ** (-q)
        return np.where(inner, val_in, val_out)

    def __call__(self, eta):
        scalar = np.ndim(eta) == 0
        e = np.atleast_1d(np.asarray(eta, dtype=float))
        ae = np.abs(e)
        out = np.where(e >= 0, self._branch(ae, True), self._branch(ae, False))
        out = np.asarray(out, dtype=complex)
        if np.any(e == 0.0):
            out[e == 0.0] = complex("nan")
        return complex(out[0]) if scalar else out


def _tabulate_branch(f, g, sign: float, eta_max: float, n_s: int, cfg):
    s_max = math.sqrt(eta_max)
    s_nodes = np.linspace(0.0, s_max, n_s)
    w = np.empty(n_s, dtype=complex)
    etas = sign * s_nodes[1:] ** 2
    w[1:] = s_nodes[1:] * _k_batch(f, g, etas, cfg)
    # quadratic extrapolation of the smooth W(s) to s = 0 gives sigma
    p = np.polyfit(s_nodes[1:5], w[1:5], 2)
    w[0] = p[-1]
    spline = CubicSpline(s_nodes, w)
    # complex-power tail anchored at eta_max
    k_end = w[-1] / s_max
    s_in = math.sqrt(eta_max / 1.5)
    k_in = complex(spline(s_in)) / s_in
    if abs(k_end) < 1e-300 or abs(k_in) < 1e-300:
        tail = (complex(k_end), 2.0 + 0.0j)
    else:
        q = -cmath.log(k_end / k_in) / math.log(1.5)
        q = complex(min(max(q.real, 0.0), 8.0), min(max(q.imag, -8.0), 8.0))
        tail = (complex(k_end), q)
    return spline, tail


_K_CACHE: dict = {}


def clear_k_cache():
    _K_CACHE.clear()


def tabulate_K(
    f,
    g,
    cfg: QuadPanelConfig | None = None,
    *,
    eta_max: float = 200.0,
    n_s: int = 480,
    conj_symmetric: bool = True,
) -> TabulatedK:
    """Build (or fetch from cache) the tabulated K(f, g).

    With conj_symmetric=True (both fields satisfy u(-x) = conj(u(x)), as all
    spectra here do), K(-eta) = conj(K(eta)) and only the positive branch is
    computed."""
    cfg = cfg or QuadPanelConfig()
    key = (id(f), id(g), float(cfg.tol), float(eta_max), int(n_s), conj_symmetric)
    hit = _K_CACHE.get(key)
    if hit is not None:
        return hit[2]
    sp_pos, tail_pos = _tabulate_branch(f, g, +1.0, eta_max, n_s, cfg)
    if conj_symmetric:
        xs = sp_pos.x
        sp_neg = CubicSpline(xs, np.conjugate(sp_pos(xs)))
        tail_neg = (np.conjugate(tail_pos[0]), np.conjugate(tail_pos[1]))
    else:
        sp_neg, tail_neg = _tabulate_branch(f, g, -1.0, eta_max, n_s, cfg)
    tab = TabulatedK(sp_pos, sp_neg, eta_max, tail_pos, tail_neg)
    if len(_K_CACHE) > 32:
        _K_CACHE.clear()
    _K_CACHE[key] = (f, g, tab)  # pin f, g so ids stay unique
    return tab


# ---------------------------------------------------------------------------
# J


def J_eval(f, g, xi: float, cfg: QuadPanelConfig | None = None, mode: str = "brute") -> complex:
    """J(f, g)(xi) = int e^{-3i Phi(xi, eta)} conj(f)(eta - xi) g(eta) deta.

    mode="brute": oscillation-aware quadrature with analytic IBP tails.
    mode="fast" (requires |xi| > 2): two-point stationary-phase formula plus
    the origin contribution from g's 1/sqrt|eta| singularity (present when g
    is a TabulatedK).
    """
    cfg = cfg or QuadPanelConfig()
    xi = float(xi)
    if mode == "fast":
        ax = abs(xi)
        if ax <= 2.0:
            raise ValueError("fast mode of J requires |xi| > 2")
        s = 1.0 if xi > 0 else -1.0
        pref = math.sqrt(2.0 * math.pi / (3.0 * ax))
        rot = cmath.exp(-1j * s * math.pi / 4.0)
        t1 = rot * np.conjugate(f(xi)) * complex(g(2.0 * xi))
        t2 = (
            np.conjugate(rot)
            * np.conjugate(f(-xi / 3.0))
            * complex(g(2.0 * xi / 3.0))
            * cmath.exp(-8j * xi**3 / 9.0)
        )
        total = pref * (complex(t1) + complex(t2))
        sig_p = getattr(g, "sigma_plus", None)
        if sig_p is not None:
            sig_m = g.sigma_minus
            total += (
                math.sqrt(math.pi / 3.0)
                / ax
                * complex(np.conjugate(f(-xi)))
                * (
                    sig_p * cmath.exp(-1j * math.pi / 4.0)
                    + sig_m * cmath.exp(1j * math.pi / 4.0)
                )
            )
        return complex(total)
    if mode != "brute":
        raise ValueError(f"unknown J mode {mode!r}")

    coeffs = _PHASE.j_phase_coeffs(xi)

    def amp(eta):
        e = np.asarray(eta, dtype=float)
        return np.conjugate(f(e - xi)) * g(e)

    R = max(60.0, 3.0 * abs(xi))
    sings = [0.0] if getattr(g, "has_sqrt_sing", False) else []
    core = osc_cubic(
        coeffs,
        amp,
        -R,
        R,
        sqrt_sings=sings,
        jumps=[xi] if -R < xi < R else [],
        tol=cfg.tol,
        base_scale=1.0,
        max_panels=cfg.max_panels,
    )
    tails = ibp_tail(coeffs, amp, R, terms=cfg.tail_terms, direction=+1)
    tails += ibp_tail(coeffs, amp, R, terms=cfg.tail_terms, direction=-1)
    return complex(core + tails)


# ---------------------------------------------------------------------------
# I


def I_eval(
    f,
    g,
    h,
    xi: float,
    cfg: QuadPanelConfig | None = None,
    mode: str = "brute",
    *,
    ktab: TabulatedK | None = None,
) -> complex:
    """I(f, g, h)(xi) = (1/2) J(h, K(f, g))(xi) with K tabulated."""
    cfg = cfg or QuadPanelConfig()
    kt = ktab if ktab is not None else tabulate_K(f, g, cfg)
    return 0.5 * J_eval(h, kt, xi, cfg, mode)
