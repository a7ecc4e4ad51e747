"""Command-line interface, configuration, persistence, and reports.

Subcommands:
    spectrum   solve the Fourier-side fixed point for a given amplitude A
    invert     recover A from target boundary data (c, alpha), then spectrum
    painleve   integrate the physical-space profile and fit its envelope
    verify     prop7 cross-validation or brute-vs-asymptotic sweep tables

Exit codes: 0 success, 1 usage/parameter error, 2 non-convergence.

Every run writes a JSON manifest (command, fully resolved configuration,
input hashes, output file list, wall time, versions).  CSV outputs are
byte-reproducible for identical configuration: all quadrature and FFT
orderings are fixed, and sweep workers (MKDVSS_WORKERS) only evaluate
independent points whose results are collected in submission order.

A configuration file (--config, key=value lines, keys spelled like the
long flags) supplies defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import cmath
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from pathlib import Path

import numpy as np

from . import __version__
from .ansatz import ISSS_asym, KSS_asym, S_eval, ansatz_constants
from .fixedpoint import invert_boundary, solve_fixed_point
from .model import (
    BoundaryData,
    ModelConfig,
    SpectralField,
    field_to_csv,
    make_grid,
)
from .operators import I_eval, J_eval, K_eval, tabulate_K
from .painleve import (
    PainleveConfig,
    envelope_fit,
    integrate_profile,
    profile_to_csv,
    rho_of_kappa,
    rho_of_kappa_rescaled,
    theta_candidate,
)
from .quadrature import QuadPanelConfig
from .specfun import airy, airy_asym, fresnel_tail
from .transform import composite_field, cross_validate_prop7

_DEFAULT_GRID_POINTS = 280


@dataclass
class RunManifest:
    command: str
    config: dict
    input_hashes: dict
    outputs: list = field(default_factory=list)
    wall_time_s: float = 0.0
    versions: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)

    def write(self, out_dir: Path) -> Path:
        path = out_dir / f"{self.command.replace(' ', '_')}_manifest.json"
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")
        return path


def _versions() -> dict:
    import scipy

    return {
        "mkdv_selfsim": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": sys.version.split()[0],
    }


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("MKDVSS_WORKERS", "1")))
    except ValueError:
        return 1


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _write(out_dir: Path, name: str, text: str, manifest: RunManifest) -> None:
    path = out_dir / name
    path.write_text(text)
    manifest.outputs.append(name)


def _manifest_for(command: str, config: dict, config_file: str | None) -> RunManifest:
    hashes = {"resolved_config": _sha256(json.dumps(config, sort_keys=True).encode())}
    if config_file:
        hashes["config_file"] = _sha256(Path(config_file).read_bytes())
    return RunManifest(
        command=command, config=config, input_hashes=hashes, versions=_versions()
    )


# ---------------------------------------------------------------------------
# configuration-file handling


def _load_config_file(path: str) -> dict:
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"malformed config line: {raw!r}")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _resolve(args, file_cfg: dict, dest: str, cast, default):
    """Flag value if given, else config-file value, else default."""
    flag = getattr(args, dest, None)
    if flag is not None:
        return flag
    if dest in file_cfg:
        return cast(file_cfg[dest])
    if default is None:
        raise ValueError(f"missing required option --{dest.replace('_', '-')}")
    return default


def _model_config(args, file_cfg: dict) -> ModelConfig:
    return ModelConfig(
        epsilon=_resolve(args, file_cfg, "eps", int, None),
        xi_max=_resolve(args, file_cfg, "xi_max", float, 30.0),
        tol_fixed_point=_resolve(args, file_cfg, "tol", float, 1e-8),
    )


def _model_config_dict(cfg: ModelConfig) -> dict:
    return {
        "epsilon": cfg.epsilon,
        "k": cfg.k,
        "gamma": cfg.gamma,
        "xi_max": cfg.xi_max,
        "tol_fixed_point": cfg.tol_fixed_point,
        "tol_quad": cfg.tol_quad,
        "smallness_radius": cfg.smallness_radius,
    }


def config_from_manifest(d: dict) -> ModelConfig:
    """Rebuild the solver configuration recorded in a spectrum manifest."""
    keys = (
        "epsilon",
        "k",
        "gamma",
        "xi_max",
        "tol_fixed_point",
        "tol_quad",
        "smallness_radius",
    )
    return ModelConfig(**{k: d["model"][k] for k in keys})


# ---------------------------------------------------------------------------
# spectrum / invert


def _resample(field_obj: SpectralField, grid: np.ndarray) -> SpectralField:
    from scipy.interpolate import PchipInterpolator

    values = field_obj(grid)
    d = field_obj.deriv
    dre = PchipInterpolator(field_obj.grid, d.real, extrapolate=False)
    dim = PchipInterpolator(field_obj.grid, d.imag, extrapolate=False)
    return SpectralField(
        grid=grid, values=values, deriv=dre(grid) + 1j * dim(grid),
        tail=field_obj.tail,
    )


def _emit_spectrum_outputs(state, cfg, args, file_cfg, manifest, out_dir):
    field_obj = composite_field(state, cfg)
    n_high = _resolve(args, file_cfg, "grid_points", int, _DEFAULT_GRID_POINTS)
    if n_high != _DEFAULT_GRID_POINTS:
        field_obj = _resample(field_obj, make_grid(cfg, n_high=n_high))
    _write(out_dir, "spectrum_field.csv", field_to_csv(field_obj), manifest)
    p = state.params
    manifest.results.update(
        {
            "A": {"re": p.A.real, "im": p.A.imag},
            "a": p.a,
            "c": state.c,
            "alpha": state.alpha,
            "calI": {"re": state.calI.real, "im": state.calI.imag},
            "iterations": state.iteration,
            "contraction_ratio": state.contraction_ratio,
            "n_grid_points": len(field_obj.grid),
        }
    )


def _cmd_spectrum(args, file_cfg) -> RunManifest:
    cfg = _model_config(args, file_cfg)
    A = complex(
        _resolve(args, file_cfg, "a_re", float, None),
        _resolve(args, file_cfg, "a_im", float, 0.0),
    )
    config = {"model": _model_config_dict(cfg), "A_re": A.real, "A_im": A.imag}
    manifest = _manifest_for("spectrum", config, args.config)
    out_dir = Path(args.out_dir)
    state = solve_fixed_point(A, cfg)
    _emit_spectrum_outputs(state, cfg, args, file_cfg, manifest, out_dir)
    return manifest


def _cmd_invert(args, file_cfg) -> RunManifest:
    cfg = _model_config(args, file_cfg)
    target = BoundaryData(
        c=_resolve(args, file_cfg, "c", float, None),
        alpha=_resolve(args, file_cfg, "alpha", float, None),
    )
    config = {
        "model": _model_config_dict(cfg),
        "target_c": target.c,
        "target_alpha": target.alpha,
    }
    manifest = _manifest_for("invert", config, args.config)
    out_dir = Path(args.out_dir)
    A, state = invert_boundary(target, cfg.epsilon, cfg)
    _emit_spectrum_outputs(state, cfg, args, file_cfg, manifest, out_dir)
    manifest.results["boundary_residual"] = math.hypot(
        state.c - target.c, state.alpha - target.alpha
    )
    return manifest


# ---------------------------------------------------------------------------
# painleve


def _cmd_painleve(args, file_cfg) -> RunManifest:
    pcfg = PainleveConfig(
        kappa=_resolve(args, file_cfg, "kappa", float, None),
        y_end=_resolve(args, file_cfg, "y_end", float, -60.0),
        rk_tol=_resolve(args, file_cfg, "rk_tol", float, 1e-9),
    )
    config = {
        "kappa": pcfg.kappa,
        "epsilon": pcfg.epsilon,
        "alpha": pcfg.alpha,
        "y_start": pcfg.y_start,
        "y_end": pcfg.y_end,
        "rk_tol": pcfg.rk_tol,
    }
    manifest = _manifest_for("painleve", config, args.config)
    out_dir = Path(args.out_dir)
    profile = integrate_profile(pcfg)
    _write(out_dir, "painleve_profile.csv", profile_to_csv(profile), manifest)
    if pcfg.kappa == 0.0:
        env = {"kappa": 0.0, "rho_fit": None, "theta_fit": None, "residual": None}
    else:
        fit = envelope_fit(profile)
        env = {
            "kappa": pcfg.kappa,
            "rho_fit": fit.rho,
            "theta_fit": fit.theta,
            "residual": fit.residual,
            "window": list(fit.window),
            "rho_formula_printed": rho_of_kappa(pcfg.kappa),
            "rho_formula_rescaled": rho_of_kappa_rescaled(pcfg.kappa),
            "theta_candidate_im_loggamma": theta_candidate(
                fit.rho, math.copysign(1.0, pcfg.kappa)
            ),
        }
    _write(
        out_dir,
        "painleve_envelope.json",
        json.dumps(env, indent=2, sort_keys=True) + "\n",
        manifest,
    )
    manifest.results.update(env)
    return manifest


# ---------------------------------------------------------------------------
# verify


def _cmd_verify_prop7(args, file_cfg) -> RunManifest:
    kappa = _resolve(args, file_cfg, "kappa", float, None)
    config = {"kappa": kappa, "epsilon": -1}
    manifest = _manifest_for("verify prop7", config, args.config)
    out_dir = Path(args.out_dir)
    report = cross_validate_prop7(kappa)
    _write(
        out_dir,
        "prop7_report.json",
        json.dumps(report, indent=2, sort_keys=True) + "\n",
        manifest,
    )
    manifest.results.update(report)
    print(
        "prop7 kappa=%g: rho_ode=%.6g rho_fourier=%.6g rel=%.3e alpha_resid=%.2e"
        % (
            kappa,
            report["rho_ode"],
            report["rho_fourier"],
            report["rel_errors"]["rho"],
            report["alpha_residual"],
        )
    )
    return manifest


def _csv_table(header: list, rows: list) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def _sweep_fresnel(pool) -> tuple[str, str, dict]:
    c0 = math.sqrt(math.pi) / 2.0 * cmath.exp(1j * math.pi / 4.0)
    lams = [0.01, 0.1, 1.0, 2.0, 5.0, 10.0, 20.0]
    rows = []
    for lam in lams:
        v = fresnel_tail(lam).value
        dev_small = abs(v - c0)
        model = -cmath.exp(1j * lam * lam) / (2j * lam) if lam > 0 else 0.0
        dev_large = abs(v - model)
        rows.append([lam, v.real, v.imag, dev_small, lam, dev_large, lam**-3])
    header = ["lam", "re", "im", "dev_small", "bound_small", "dev_large", "bound_large"]
    ok = all(r[3] <= r[4] and (r[0] < 2.0 or r[5] <= r[6]) for r in rows)
    return _csv_table(header, rows), "fresnel_table.csv", {"fresnel_ok": ok}


def _sweep_airy(pool) -> tuple[str, str, dict]:
    rows = []
    for y in [-36.0, -24.0, -16.0, -10.0, 10.0, 16.0, 24.0, 36.0]:
        v = airy(y)
        model = airy_asym(y, 1 if y > 0 else -1)
        dev = abs(v.ai - model) / max(abs(model), 1e-300)
        rows.append([y, v.ai, v.ai_prime, model, dev])
    header = ["y", "ai", "ai_prime", "asym_model", "rel_dev"]
    return _csv_table(header, rows), "airy_table.csv", {}


def _fit_slope(xs, ds) -> float:
    return float(np.polyfit(np.log(xs), np.log(ds), 1)[0])


def _sweep_J(pool) -> tuple[str, str, dict]:
    p = ansatz_constants(0.2, -1)
    S = partial(S_eval, p)
    qcfg = QuadPanelConfig(tol=1e-9)
    tab = tabulate_K(S, S, qcfg)
    xis = [10.0, 14.0, 20.0, 28.0, 40.0]

    def point(xi):
        brute = J_eval(S, tab, xi, qcfg, "brute")
        fast = J_eval(S, tab, xi, qcfg, "fast")
        return [xi, abs(brute), abs(fast), abs(brute - fast)]

    rows = list(pool.map(point, xis))
    slope = _fit_slope([r[0] for r in rows], [r[3] for r in rows])
    header = ["xi", "abs_brute", "abs_fast", "abs_diff"]
    return _csv_table(header, rows), "j_table.csv", {"j_decay_slope": slope}


def _sweep_K(pool) -> tuple[str, str, dict]:
    p = ansatz_constants(0.2, -1)
    S = partial(S_eval, p)
    qcfg = QuadPanelConfig(tol=1e-9)
    etas = [10.0, 15.0, 20.0, 30.0, 40.0]

    def point(eta):
        diff = abs(K_eval(S, S, eta, qcfg) - KSS_asym(p, eta))
        return [eta, diff, diff * eta**2]

    rows = list(pool.map(point, etas))
    header = ["eta", "abs_diff", "scaled_eta2"]
    return _csv_table(header, rows), "k_table.csv", {
        "k_scaled_max": max(r[2] for r in rows)
    }


def _sweep_I(pool) -> tuple[str, str, dict]:
    p = ansatz_constants(0.2, -1)
    S = partial(S_eval, p)
    qcfg = QuadPanelConfig(tol=1e-9)
    gamma = 0.9
    xis = [10.0, 14.0, 20.0]

    def point(xi):
        diff = abs(I_eval(S, S, S, xi, qcfg, "brute") - ISSS_asym(p, xi))
        return [xi, diff, diff * xi ** (2.0 - gamma / 2.0)]

    rows = list(pool.map(point, xis))
    header = ["xi", "abs_diff", "scaled"]
    return _csv_table(header, rows), "i_table.csv", {
        "i_scaled_max": max(r[2] for r in rows)
    }


_SWEEPS = {
    "fresnel": _sweep_fresnel,
    "airy": _sweep_airy,
    "J": _sweep_J,
    "K": _sweep_K,
    "I": _sweep_I,
}


def _cmd_verify_asymptotics(args, file_cfg) -> RunManifest:
    which = _resolve(args, file_cfg, "which", str, "all")
    names = list(_SWEEPS) if which == "all" else [which]
    config = {"which": names, "workers": _workers()}
    manifest = _manifest_for("verify asymptotics", config, args.config)
    out_dir = Path(args.out_dir)
    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        for name in names:
            text, filename, extra = _SWEEPS[name](pool)
            _write(out_dir, filename, text, manifest)
            manifest.results.update(extra)
    return manifest


# ---------------------------------------------------------------------------
# parser / dispatch


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mkdvss",
        description="Self-similar profile construction and verification",
    )

    def common(sp):
        sp.add_argument("--out-dir", default=".")
        sp.add_argument("--config", default=None, help="key=value defaults file")

    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="solve the Fourier-side fixed point")
    sp.add_argument("--a-re", type=float, dest="a_re")
    sp.add_argument("--a-im", type=float, dest="a_im")
    sp.add_argument("--eps", type=int, choices=(-1, 1))
    sp.add_argument("--xi-max", type=float, dest="xi_max")
    sp.add_argument("--grid-points", type=int, dest="grid_points")
    sp.add_argument("--tol", type=float)
    common(sp)

    sp = sub.add_parser("invert", help="recover A from boundary data (c, alpha)")
    sp.add_argument("--c", type=float)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--eps", type=int, choices=(-1, 1))
    sp.add_argument("--xi-max", type=float, dest="xi_max")
    sp.add_argument("--grid-points", type=int, dest="grid_points")
    sp.add_argument("--tol", type=float)
    common(sp)

    sp = sub.add_parser("painleve", help="integrate the physical profile")
    sp.add_argument("--kappa", type=float)
    sp.add_argument("--y-end", type=float, dest="y_end")
    sp.add_argument("--rk-tol", type=float, dest="rk_tol")
    common(sp)

    sp = sub.add_parser("verify", help="verification pipelines")
    vsub = sp.add_subparsers(dest="verify_what", required=True)
    vp = vsub.add_parser("prop7", help="ODE <-> Fourier cross-validation")
    vp.add_argument("--kappa", type=float)
    common(vp)
    va = vsub.add_parser("asymptotics", help="brute-vs-asymptotic sweep tables")
    va.add_argument("--which", choices=tuple(_SWEEPS) + ("all",))
    common(va)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    file_cfg = {}
    try:
        if args.config:
            file_cfg = _load_config_file(args.config)
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        if args.command == "spectrum":
            manifest = _cmd_spectrum(args, file_cfg)
        elif args.command == "invert":
            manifest = _cmd_invert(args, file_cfg)
        elif args.command == "painleve":
            manifest = _cmd_painleve(args, file_cfg)
        elif args.verify_what == "prop7":
            manifest = _cmd_verify_prop7(args, file_cfg)
        else:
            manifest = _cmd_verify_asymptotics(args, file_cfg)
        manifest.wall_time_s = time.perf_counter() - t0
        path = manifest.write(out_dir)
        print(f"wrote {path}")
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
