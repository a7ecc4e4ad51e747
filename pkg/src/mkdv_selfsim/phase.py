"""Cutoff functions, the cubic phase polynomial, and stationary-point charts.

The trilinear nonlinearity's eta-integral carries the phase
Phi(xi, eta) = xi^3 P(eta/xi) with P(X) = X - X^2 + X^3/4, stationary at
X = 2 (P=0, P''=1) and X = 2/3 (P=8/27, P''=-3/2).  A five-piece smooth
partition of unity isolates the origin (phi_1), the two stationary points
(phi_2 at 2/3 scaled, phi_4 at 2 scaled), and the regions between/beyond
(phi_3, phi_5).  Charts psi_1, psi_2, psi_3 invert P near each feature so
the transplanted phase is exactly quadratic (or linear at the origin).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

__all__ = ["PhasePoly", "CutoffFamily", "PhaseChart", "phase_charts"]


# ---------------------------------------------------------------------------
# cutoffs


def _smoothstep_ratio(t_up, t_dn):
    """h(t_up) / (h(t_up) + h(t_dn)) with h(t) = exp(-1/t) for t>0 else 0."""
    t_up = np.asarray(t_up, dtype=float)
    t_dn = np.asarray(t_dn, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        hu = np.where(t_up > 0, np.exp(-1.0 / np.maximum(t_up, 1e-300)), 0.0)
        hd = np.where(t_dn > 0, np.exp(-1.0 / np.maximum(t_dn, 1e-300)), 0.0)
    denom = hu + hd
    return np.where(denom > 0, hu / np.where(denom > 0, denom, 1.0), 0.0)


@dataclass(frozen=True)
class CutoffFamily:
    """Base cutoff phi (1 on [0,1], 0 beyond 7/6), its ring, the five-piece
    radial partition of unity, and the smooth outer cutoff chi (0 below 1,
    1 above 2)."""

    def phi(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        return _smoothstep_ratio(7.0 / 6.0 - r, r - 1.0)

    def ring(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        return self.phi(r) - self.phi(2.0 * r)

    def phi1(self, r):
        return self.phi(8.0 * np.abs(r) / 3.0)

    def phi2(self, r):
        return self.ring(4.0 * np.abs(r) / 3.0)

    def phi3(self, r):
        return self.ring(2.0 * np.abs(r) / 3.0)

    def phi4(self, r):
        return self.ring(np.abs(r) / 3.0)

    def phi5(self, r):
        return 1.0 - self.phi(np.abs(r) / 3.0)

    def chi(self, xi):
        x = np.abs(np.asarray(xi, dtype=float))
        return _smoothstep_ratio(x - 1.0, 2.0 - x)

    def chi_deriv(self, xi):
        """Exact derivative of chi (odd in xi, supported on 1 < |xi| < 2)."""
        xi = np.asarray(xi, dtype=float)
        x = np.abs(xi)
        tu = x - 1.0
        td = 2.0 - x
        inside = (tu > 0) & (td > 0)
        tu = np.where(inside, tu, 1.0)
        td = np.where(inside, td, 1.0)
        hu = np.exp(-1.0 / tu)
        hd = np.exp(-1.0 / td)
        # chi = hu/(hu+hd); h'(t) = h(t)/t^2 and d(hd)/dx = -h'(td)
        num = (hu / tu**2) * hd + hu * (hd / td**2)
        val = np.where(inside, num / (hu + hd) ** 2, 0.0)
        return val * np.sign(xi)


# ---------------------------------------------------------------------------
# phase polynomial


@dataclass(frozen=True)
class PhasePoly:
    """P(X) = X - X^2 + X^3/4 and Phi(xi,eta) = xi^3 P(eta/xi)."""

    p_coeffs: tuple = (0.0, 1.0, -1.0, 0.25)

    def P(self, X):
        X = np.asarray(X, dtype=float)
        return X * (1.0 + X * (-1.0 + 0.25 * X))

    def dP(self, X):
        X = np.asarray(X, dtype=float)
        return 1.0 + X * (-2.0 + 0.75 * X)

    def d2P(self, X):
        return -2.0 + 1.5 * np.asarray(X, dtype=float)

    def Phi(self, xi, eta):
        """xi^3 P(eta/xi) in homogeneous (xi=0 safe) form."""
        xi = np.asarray(xi, dtype=float)
        eta = np.asarray(eta, dtype=float)
        return eta * (xi * xi + eta * (-xi + 0.25 * eta))

    def j_phase_coeffs(self, xi: float) -> tuple:
        """Coefficients in eta of the J-integrand phase -3 Phi(xi, eta)."""
        return (0.0, -3.0 * xi * xi, 3.0 * xi, -0.75)


# ---------------------------------------------------------------------------
# charts


@dataclass(frozen=True)
class PhaseChart:
    """Inverse of P near one feature: P(psi(mu)) = target(mu)."""

    which: str  # "psi1" (X=2), "psi2" (X=2/3), "psi3" (origin)
    mu_lo: float
    mu_hi: float
    _spline: CubicSpline = field(repr=False)
    _dspline: CubicSpline = field(repr=False)

    def psi(self, mu):
        mu = np.asarray(mu, dtype=float)
        if np.any((mu < self.mu_lo - 1e-12) | (mu > self.mu_hi + 1e-12)):
            raise ValueError(f"{self.which}: argument outside validity interval")
        mu = np.clip(mu, self.mu_lo, self.mu_hi)
        x = np.asarray(self._spline(mu), dtype=float)
        # guarded Newton polish of the spline seed; near the chart centers
        # P' vanishes (quadratic extremum) and the raw step is ill-posed, so
        # a step is only kept where it reduces the residual
        poly = PhasePoly()
        tgt = self.target(mu)
        for _ in range(3):
            r = poly.P(x) - tgt
            dp = poly.dP(x)
            step = np.where(dp != 0.0, r / np.where(dp != 0.0, dp, 1.0), 0.0)
            cand = x - step
            better = np.abs(poly.P(cand) - tgt) < np.abs(r)
            x = np.where(better, cand, x)
        return x

    def dpsi(self, mu):
        mu = np.asarray(mu, dtype=float)
        return self._dspline(np.clip(mu, self.mu_lo, self.mu_hi))

    def target(self, mu):
        mu = np.asarray(mu, dtype=float)
        if self.which == "psi1":
            return mu * mu
        if self.which == "psi2":
            return 8.0 / 27.0 - mu * mu
        return mu  # psi3: linear chart

    def residual(self, mu) -> np.ndarray:
        p = PhasePoly()
        return np.abs(p.P(self.psi(mu)) - self.target(mu))


def _build_chart(which, mu_lo, mu_hi, bracket_of_mu, n=1200) -> PhaseChart:
    poly = PhasePoly()
    mus = np.linspace(mu_lo, mu_hi, n)
    # pin the exact center sample
    center = {"psi1": 2.0, "psi2": 2.0 / 3.0, "psi3": 0.0}[which]
    xs = np.empty(n)
    for i, mu in enumerate(mus):
        if mu == 0.0:
            xs[i] = center
            continue
        lo, hi = bracket_of_mu(mu)
        tgt = (
            mu * mu
            if which == "psi1"
            else (8.0 / 27.0 - mu * mu if which == "psi2" else mu)
        )
        xs[i] = brentq(lambda x: poly.P(x) - tgt, lo, hi, xtol=1e-15, rtol=1e-15)
    sp = CubicSpline(mus, xs)
    return PhaseChart(
        which=which, mu_lo=mu_lo, mu_hi=mu_hi, _spline=sp, _dspline=sp.derivative()
    )


def phase_charts(eps_interval: float = 1e-9):
    """Construct (psi1, psi2, psi3) by per-sample root-finding + splines.

    psi1 covers the X=2 stationary point out to X in [1.3, 4];
    psi2 covers X=2/3 out to X in [0.30, 0.95];
    psi3 covers the origin out to |X| <= 1/2.
    eps_interval shrinks brackets away from the neighbouring stationary
    point where P' vanishes.
    """
    poly = PhasePoly()
    e = float(eps_interval)

    # psi1: P decreasing on (2/3, 2), increasing on (2, inf)
    mu1_lo = -math.sqrt(poly.P(1.3))
    mu1_hi = math.sqrt(poly.P(4.0))
    psi1 = _build_chart(
        "psi1",
        mu1_lo,
        mu1_hi,
        lambda mu: (1.3 - 1e-6, 2.0) if mu < 0 else (2.0, 4.0 + 1e-6),
    )
    # psi2: P increasing left of 2/3, decreasing right of it (local max 8/27)
    mu2_lo = -math.sqrt(8.0 / 27.0 - poly.P(0.30))
    mu2_hi = math.sqrt(8.0 / 27.0 - poly.P(0.95))
    psi2 = _build_chart(
        "psi2",
        mu2_lo,
        mu2_hi,
        lambda mu: (0.30 - 1e-6, 2.0 / 3.0) if mu < 0 else (2.0 / 3.0, 0.95 + 1e-6),
    )
    # psi3: P monotone on [-1/2, 1/2]
    nu_lo = float(poly.P(-0.5))
    nu_hi = float(poly.P(0.5))
    psi3 = _build_chart(
        "psi3", nu_lo, nu_hi, lambda mu: (-0.5 - 1e-6, 0.5 + 1e-6)
    )
    del e
    return psi1, psi2, psi3
