"""The two-term ansatz S_A and closed-form asymptotic models.

For xi > 0 the ansatz is

    S_A(xi) = chi(xi) e^{i a ln xi} (A + B e^{2i a ln xi} e^{i beta xi^3} / xi^3),

with S_A(-xi) = conj(S_A(xi)), beta = -8/9 and a = -(3 eps/4 pi)|A|^2.  The
second-term amplitude B is fixed by requiring that the leading ripple of
S_A' cancels the ripple of -(3 i eps/4 pi^2) I(S_A,S_A,S_A):

    3 i beta B = -(3 i eps / 4 pi^2) F   =>   B = (9 eps / 32 pi^2) F.

Constants of the trilinear asymptotics (xi >= 10):

    I(S,S,S)(xi) = (e^{ia ln xi}/xi) (E + F e^{2ia ln xi} e^{-8i xi^3/9})
                   + O(xi^{gamma/2 - 2}),
    E = pi |A|^2 A,
    F = i (pi/sqrt 3) e^{-3ia ln 3} A^3.

E collects pi/3 from the eta = 2 xi stationary point plus 2 pi/3 from the
origin region of the eta-integral.  F is the eta = 2 xi/3 stationary-point
contribution; its coefficient uses the corrected stationary value
P''(2/3) = -1 (coefficient sqrt 2, not the misprinted 2/sqrt 3 -- see the
project notes), and its log-phase collects a ln(xi^2/9) from K(S,S)(2 xi/3)
plus a ln(xi/3) from S(xi/3), i.e. e^{3ia ln xi} e^{-3ia ln 3}.  Both E and
F are confirmed against brute-force quadrature of the defining triple
integral in the test suite.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .phase import CutoffFamily

__all__ = ["AnsatzParams", "ansatz_constants", "S_eval", "S_deriv", "KSS_asym", "ISSS_asym"]

_LN3 = math.log(3.0)
_CUT = CutoffFamily()


@dataclass(frozen=True)
class AnsatzParams:
    A: complex
    epsilon: int
    a: float
    B: complex
    beta: float
    E: complex
    F: complex


def ansatz_constants(A: complex, epsilon: int) -> AnsatzParams:
    if abs(A) >= 1.0:
        raise ValueError("ansatz amplitude must satisfy |A| < 1")
    if epsilon not in (-1, 1):
        raise ValueError("epsilon must be +1 or -1")
    A = complex(A)
    a = -(3.0 * epsilon / (4.0 * math.pi)) * abs(A) ** 2
    E = math.pi * abs(A) ** 2 * A
    F = 1j * (math.pi / math.sqrt(3.0)) * cmath.exp(-3j * a * _LN3) * A**3
    B = (9.0 * epsilon / (32.0 * math.pi**2)) * F
    return AnsatzParams(A=A, epsilon=epsilon, a=a, B=B, beta=-8.0 / 9.0, E=E, F=F)


def _s_pos(p: AnsatzParams, x: np.ndarray) -> np.ndarray:
    """S_A on x > 0 (no conjugation)."""
    lx = np.log(x)
    main = p.A + p.B * np.exp(2j * p.a * lx) * np.exp(1j * p.beta * x**3) / x**3
    return _CUT.chi(x) * np.exp(1j * p.a * lx) * main


def _s_pos_deriv(p: AnsatzParams, x: np.ndarray) -> np.ndarray:
    lx = np.log(x)
    e1 = np.exp(1j * p.a * lx)
    ripple = np.exp(2j * p.a * lx) * np.exp(1j * p.beta * x**3) / x**3
    main = p.A + p.B * ripple
    chi = _CUT.chi(x)
    dchi = _CUT.chi_deriv(x)
    dmain = (1j * p.a / x) * p.A + p.B * ripple * (
        3j * p.a / x - 3.0 / x + 3j * p.beta * x**2
    )
    return dchi * e1 * main + chi * e1 * dmain


def S_eval(p: AnsatzParams, xi) -> np.ndarray | complex:
    scalar = np.ndim(xi) == 0
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.zeros(x.shape, dtype=complex)
    pos = x > 1.0
    neg = x < -1.0
    if np.any(pos):
        out[pos] = _s_pos(p, x[pos])
    if np.any(neg):
        out[neg] = np.conjugate(_s_pos(p, -x[neg]))
    return complex(out[0]) if scalar else out


def S_deriv(p: AnsatzParams, xi) -> np.ndarray | complex:
    scalar = np.ndim(xi) == 0
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.zeros(x.shape, dtype=complex)
    pos = x > 1.0
    neg = x < -1.0
    if np.any(pos):
        out[pos] = _s_pos_deriv(p, x[pos])
    if np.any(neg):
        # d/dxi conj(S(-xi)) = -conj(S'(-xi))
        out[neg] = -np.conjugate(_s_pos_deriv(p, -x[neg]))
    return complex(out[0]) if scalar else out


_C_KSS = math.sqrt(4.0 * math.pi / 3.0)


def KSS_asym(p: AnsatzParams, eta) -> np.ndarray | complex:
    """Leading model of K(S,S): stationary value of the nu-integral.

    e^{+i pi/4} sqrt(4 pi/3) A^2 e^{ia ln(eta^2/4)} / sqrt(eta) for eta >= 10,
    conjugate-amplitude form for eta <= -10.
    """
    scalar = np.ndim(eta) == 0
    e = np.atleast_1d(np.asarray(eta, dtype=float))
    if np.any(np.abs(e) < 10.0):
        raise ValueError("KSS_asym requires |eta| >= 10")
    ae = np.abs(e)
    pos_val = (
        cmath.exp(1j * math.pi / 4.0)
        * _C_KSS
        * p.A**2
        * np.exp(1j * p.a * np.log(ae * ae / 4.0))
        / np.sqrt(ae)
    )
    out = np.where(e > 0, pos_val, np.conjugate(pos_val))
    return complex(out[0]) if scalar else out


def ISSS_asym(p: AnsatzParams, xi) -> np.ndarray | complex:
    """Leading model of I(S,S,S) for |xi| >= 10 (conjugate form for xi<0)."""
    scalar = np.ndim(xi) == 0
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(np.abs(x) < 10.0):
        raise ValueError("ISSS_asym requires |xi| >= 10")
    ax = np.abs(x)
    lx = np.log(ax)
    pos_val = (
        np.exp(1j * p.a * lx)
        / ax
        * (p.E + p.F * np.exp(2j * p.a * lx) * np.exp(-8j * ax**3 / 9.0))
    )
    out = np.where(x > 0, pos_val, np.conjugate(pos_val))
    return complex(out[0]) if scalar else out
