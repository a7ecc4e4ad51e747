"""Shared domain types: configuration, grids, spectral fields, weighted norms.

A SpectralField stores the remainder z (or the composite v = S_A + z) on a
xi >= 0 grid.  Negative frequencies are never stored: evaluation at -xi
returns the conjugate of the value at xi.  grid[0] = 0 holds the 0+ limit
(fields may jump at 0).  Behaviour past xi_max is described by a power/log
tail model.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import PchipInterpolator


@dataclass(frozen=True)
class ModelConfig:
    epsilon: int = -1
    k: float = 0.55
    gamma: float = 0.9
    xi_max: float = 30.0
    tol_fixed_point: float = 1e-8
    tol_quad: float = 1e-9
    smallness_radius: float = 0.3  # practical stand-in for the analytic smallness radius

    def __post_init__(self):
        if self.epsilon not in (-1, 1):
            raise ValueError("epsilon must be +1 or -1")
        if not (0.5 < self.k < 4.0 / 7.0):
            raise ValueError(f"k={self.k} outside (1/2, 4/7)")
        if not (6.0 / 7.0 < self.gamma < 1.0):
            raise ValueError(f"gamma={self.gamma} outside (6/7, 1)")
        if self.xi_max < 10.0:
            raise ValueError("xi_max must be >= 10")
        if self.tol_fixed_point <= 0 or self.tol_quad <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class BoundaryData:
    c: float
    alpha: float

    def check_smallness(self, radius: float) -> None:
        if self.c**2 + self.alpha**2 >= radius**2:
            raise ValueError(
                f"boundary data ({self.c}, {self.alpha}) outside smallness "
                f"radius {radius}"
            )


@dataclass(frozen=True)
class TailModel:
    """v(xi) ~ amplitude * (xi/xi_ref)^(-decay) * e^{i slope ln(xi/xi_ref)}."""

    amplitude: complex = 0.0
    log_phase_slope: float = 0.0
    decay_exponent: float = 0.0

    def eval(self, xi: np.ndarray, xi_ref: float) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        r = xi / xi_ref
        out = self.amplitude * r ** (-self.decay_exponent) * np.exp(
            1j * self.log_phase_slope * np.log(r)
        )
        return out


def _as_readonly(a, dtype):
    out = np.array(a, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SpectralField:
    grid: np.ndarray
    values: np.ndarray
    deriv: np.ndarray | None = None
    tail: TailModel = field(default_factory=TailModel)

    def __post_init__(self):
        g = _as_readonly(self.grid, float)
        v = _as_readonly(self.values, complex)
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)
        if self.deriv is not None:
            object.__setattr__(self, "deriv", _as_readonly(self.deriv, complex))
        if g[0] != 0.0 or np.any(np.diff(g) <= 0):
            raise ValueError("grid must start at 0 and be strictly increasing")
        if len(g) != len(v):
            raise ValueError("grid/values length mismatch")
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(g))):
            raise ValueError("non-finite samples")
        object.__setattr__(
            self, "_interp_re", PchipInterpolator(g, v.real, extrapolate=False)
        )
        object.__setattr__(
            self, "_interp_im", PchipInterpolator(g, v.imag, extrapolate=False)
        )

    @property
    def xi_max(self) -> float:
        return float(self.grid[-1])

    def __call__(self, xi) -> np.ndarray | complex:
        scalar = np.ndim(xi) == 0
        x = np.atleast_1d(np.asarray(xi, dtype=float))
        ax = np.abs(x)
        out = np.zeros(x.shape, dtype=complex)
        inside = ax <= self.xi_max
        if np.any(inside):
            out[inside] = self._interp_re(ax[inside]) + 1j * self._interp_im(
                ax[inside]
            )
        if np.any(~inside):
            out[~inside] = self.tail.eval(ax[~inside], self.xi_max)
        np.conjugate(out, where=x < 0, out=out)
        return complex(out[0]) if scalar else out

    def with_tail(self, tail: TailModel) -> "SpectralField":
        return replace(self, tail=tail)


def zero_field(grid: np.ndarray) -> SpectralField:
    z = np.zeros(len(grid), dtype=complex)
    return SpectralField(grid=grid, values=z, deriv=z.copy())


@dataclass(frozen=True)
class NormReport:
    zk_norm: float
    low_seminorm: float | None
    pieces: tuple[float, float, float]


def make_grid(config: ModelConfig, n_low: int = 120, n_high: int = 280) -> np.ndarray:
    """n_low uniform points on [0,2] plus n_high log-uniform on [2, xi_max]."""
    if n_low < 16 or n_high < 16:
        raise ValueError("n_low and n_high must be >= 16")
    low = np.linspace(0.0, 2.0, n_low)
    high = np.geomspace(2.0, config.xi_max, n_high + 1)[1:]
    return np.concatenate([low, high])


def oscillation_spacing_limit(xi: float) -> float:
    """Spacing resolving the e^{-8 i xi^3/9} ripple: (8/9) d(xi^3) <= pi/4.

    Exact chain rule gives Delta xi <= 3 pi/(32 xi^2).  (The spec's worked
    example quotes 9 pi/(32 xi^2); the factor-3 slip is documented in the
    project notes.)  The solver does not need ripple-resolving grids -- the
    ripple is carried analytically by the ansatz -- so this is diagnostic.
    """
    return 3.0 * math.pi / (32.0 * xi * xi)


def eval_field(f: SpectralField, xi) -> complex:
    return f(xi)


def zk_norm(
    f: SpectralField, config: ModelConfig, boundary: BoundaryData | None = None
) -> NormReport:
    if f.deriv is None:
        raise ValueError("zk_norm requires derivative samples")
    g = f.grid
    k = config.k
    vpiece = float(np.max(np.abs(f.values) * (1.0 + g**k)))
    pos = g > 0
    dpiece = float(np.max(np.abs(f.deriv[pos]) * (1.0 + g[pos] ** (k + 1))))
    # mirrored copy: |z'(-xi)| = |conj(z'(xi))| -- identical sup
    low = None
    if boundary is not None:
        theta = boundary.c + 1.5j * boundary.alpha / math.pi
        in01 = (g > 0) & (g < 1.0)
        t1 = float(np.max(np.abs(f.values[in01] - theta) / g[in01])) if np.any(in01) else 0.0
        ge1 = g >= 1.0
        t2 = float(np.max(np.abs(f.values[ge1]) * g[ge1] ** k))
        low = t1 + t2 + dpiece
    return NormReport(
        zk_norm=vpiece + 2.0 * dpiece, low_seminorm=low, pieces=(vpiece, dpiece, dpiece)
    )


# ---------------------------------------------------------------------------
# serialization


def field_to_csv(f: SpectralField) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["xi", "re", "im", "dre", "dim"])
    d = f.deriv if f.deriv is not None else np.zeros(len(f.grid), dtype=complex)
    for xi, v, dv in zip(f.grid, f.values, d):
        w.writerow(
            [
                repr(float(xi)),
                repr(float(v.real)),
                repr(float(v.imag)),
                repr(float(dv.real)),
                repr(float(dv.imag)),
            ]
        )
    return buf.getvalue()


def field_envelope_json(f: SpectralField, config: ModelConfig) -> str:
    return json.dumps(
        {
            "config": {
                "epsilon": config.epsilon,
                "k": config.k,
                "gamma": config.gamma,
                "xi_max": config.xi_max,
                "tol_fixed_point": config.tol_fixed_point,
                "tol_quad": config.tol_quad,
            },
            "tail": {
                "amplitude_re": f.tail.amplitude.real
                if isinstance(f.tail.amplitude, complex)
                else float(f.tail.amplitude),
                "amplitude_im": f.tail.amplitude.imag
                if isinstance(f.tail.amplitude, complex)
                else 0.0,
                "log_phase_slope": f.tail.log_phase_slope,
                "decay_exponent": f.tail.decay_exponent,
            },
            "n_points": len(f.grid),
        },
        indent=2,
        sort_keys=True,
    )


def field_from_csv(text: str, tail: TailModel = TailModel()) -> SpectralField:
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["xi", "re", "im", "dre", "dim"]
    data = np.array([[float(c) for c in row] for row in rows[1:]])
    return SpectralField(
        grid=data[:, 0],
        values=data[:, 1] + 1j * data[:, 2],
        deriv=data[:, 3] + 1j * data[:, 4],
        tail=tail,
    )
