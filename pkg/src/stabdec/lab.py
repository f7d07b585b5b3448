"""Deterministic sweep driver, scaling fits, data collapse, and SVG plots.

Every (lambda, realization) point derives its randomness from a spawned
SeedSequence of the master seed, so results are reproducible row by row and
independent of worker count or scheduling. Rows are computed, sorted, and
only then written, which makes repeated runs byte-identical.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import qnn
from .codes import builtin_code
from .decoders import generalization_error, naive_observable, qec_observable
from .encoding import LogicalSample, fix_gauge, make_noise_model, sample_logical_angles
from .spectral import (
    build_hamiltonian,
    lowest_eigenpairs,
    sample_gue_perturbation,
    stabilizer_sum_perturbation,
    uniform_xz_perturbation,
)

CSV_HEADER = "code,decoder,basis,lambda,seed,epsilon,stderr,wall_ms"
EPS_CLAMP = 1e-24  # fit floor: exact-zero errors would break the log-log fit

DECODERS = ("naive", "qec", "qnn")
PERTURBATIONS = ("gue", "uniform_xz", "stabilizer_sum")


class LabError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    code: str
    decoder: str
    lambdas: tuple[float, ...]
    basis: str = "X"
    perturbation: str = "gue"
    realizations: int = 1
    samples: int = 1000
    noise_p: int = 0
    seed: int = 0
    qnn_depth: int = 4
    qnn_topology: str = "brickwork_conv"
    train_samples: int = 400
    max_iterations: int = 2000
    restarts: int = 1
    tol: float = 1e-15
    record_timing: bool = False

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise LabError(f"unknown decoder {self.decoder!r}")
        if self.perturbation not in PERTURBATIONS:
            raise LabError(f"unknown perturbation {self.perturbation!r}")
        if not self.lambdas:
            raise LabError("need at least one lambda")
        if not self.basis or any(c not in "XYZ" for c in self.basis):
            raise LabError("basis must be letters from XYZ")
        if self.realizations < 1 or self.samples < 1:
            raise LabError("realizations and samples must be positive")


@dataclass(frozen=True)
class SweepRow:
    code: str
    decoder: str
    basis: str
    lam: float
    seed: int
    epsilon: float
    stderr: float
    wall_ms: int


@dataclass(frozen=True)
class FitReport:
    slope: float
    intercept: float
    slope_stderr: float
    window: tuple[float, float]
    n_points: int


_BOOL_KEYS = {"record_timing"}
_INT_KEYS = {"realizations", "samples", "noise_p", "seed", "qnn_depth",
             "train_samples", "max_iterations", "restarts"}
_FLOAT_KEYS = {"tol"}


def parse_config(text: str) -> SweepConfig:
    """Flat key = value format; '#' starts a comment; unknown keys are errors."""
    known = {f.name for f in fields(SweepConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise LabError(f"line {lineno}: expected key = value")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in known:
            raise LabError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise LabError(f"line {lineno}: duplicate key {key!r}")
        if key == "lambdas":
            values[key] = tuple(float(x) for x in val.replace(",", " ").split())
        elif key in _INT_KEYS:
            values[key] = int(val)
        elif key in _FLOAT_KEYS:
            values[key] = float(val)
        elif key in _BOOL_KEYS:
            if val.lower() not in ("true", "false"):
                raise LabError(f"line {lineno}: {key} must be true or false")
            values[key] = val.lower() == "true"
        else:
            values[key] = val
    missing = {"code", "decoder", "lambdas"} - set(values)
    if missing:
        raise LabError(f"missing required keys: {sorted(missing)}")
    return SweepConfig(**values)


def load_config(path) -> SweepConfig:
    return parse_config(Path(path).read_text())


def _make_perturbation(config: SweepConfig, code, rng):
    if config.perturbation == "gue":
        return sample_gue_perturbation(rng, code.n)
    if config.perturbation == "uniform_xz":
        return uniform_xz_perturbation(code.n)
    return stabilizer_sum_perturbation(code)


def _run_point(config: SweepConfig, lam_index: int, realization: int) -> list[SweepRow]:
    """One (lambda, realization) evaluation; fully determined by its seeds."""
    ss = np.random.SeedSequence(entropy=config.seed, spawn_key=(lam_index, realization))
    task_seed = int(ss.generate_state(1)[0])
    pert_ss, sample_ss, train_ss = ss.spawn(3)

    code = builtin_code(config.code)
    pert = _make_perturbation(config, code, np.random.default_rng(pert_ss))
    lam = config.lambdas[lam_index]
    spectral = lowest_eigenpairs(build_hamiltonian(code, pert, lam), 3)
    basis = fix_gauge(spectral, code)
    noise = make_noise_model(code, config.noise_p)

    sample_rng = np.random.default_rng(sample_ss)
    samples = [LogicalSample(th, ph)
               for th, ph in sample_logical_angles(sample_rng, config.samples)]

    rows = []
    for q in config.basis:
        start = time.perf_counter()
        if config.decoder == "naive":
            eps, se = generalization_error(naive_observable(code, q), basis, samples, noise)
        elif config.decoder == "qec":
            eps, se = generalization_error(qec_observable(code, q), basis, samples, noise)
        else:
            train_angles = sample_logical_angles(sample_rng, config.train_samples)
            train_samples = [LogicalSample(th, ph) for th, ph in train_angles]
            tc = qnn.TrainConfig(max_iterations=config.max_iterations,
                                 tol=config.tol, restarts=config.restarts,
                                 seed=int(train_ss.generate_state(1)[0]))
            model = qnn.build_circuit(code.n, config.qnn_depth, config.qnn_topology)
            trained, _ = qnn.train(model, basis, train_samples, noise, tc, q=q)
            eps, se = qnn.evaluate(trained, basis, samples, noise, q=q)
        wall = int(round((time.perf_counter() - start) * 1000)) if config.record_timing else 0
        rows.append(SweepRow(config.code, config.decoder, q, lam, task_seed, eps, se, wall))
    return rows


def _point_star(args):
    return _run_point(*args)


def run_sweep(config: SweepConfig, workers: int = 1, out=None) -> list[SweepRow]:
    """All (lambda, realization) points, sorted; optionally written as CSV."""
    tasks = [(config, i, r)
             for i in range(len(config.lambdas))
             for r in range(config.realizations)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_point_star, tasks))
    else:
        chunks = [_run_point(*t) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r.code, r.decoder, r.basis, r.lam, r.seed))
    if out is not None:
        write_csv(rows, out)
    return rows


def write_csv(rows, path):
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(f"{r.code},{r.decoder},{r.basis},{r.lam!r},{r.seed},"
                     f"{r.epsilon!r},{r.stderr!r},{r.wall_ms}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path) -> list[SweepRow]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise LabError(f"{path}: missing or wrong header")
    rows = []
    for line in lines[1:]:
        if not line.strip():
            continue
        c, d, b, lam, seed, eps, se, wall = line.split(",")
        rows.append(SweepRow(c, d, b, float(lam), int(seed),
                             float(eps), float(se), int(wall)))
    return rows


def mean_curve(rows, decoder=None, basis=None, code=None):
    """(lambdas, mean epsilon, mean stderr) after filtering and seed-averaging."""
    picked = [r for r in rows
              if (decoder is None or r.decoder == decoder)
              and (basis is None or r.basis == basis)
              and (code is None or r.code == code)]
    if not picked:
        raise LabError("no rows match the requested filter")
    lams = sorted({r.lam for r in picked})
    eps, errs = [], []
    for lam in lams:
        grp = [r for r in picked if r.lam == lam]
        eps.append(np.mean([r.epsilon for r in grp]))
        errs.append(np.mean([r.stderr for r in grp]))
    return np.array(lams), np.array(eps), np.array(errs)


def fit_exponent(rows, decoder=None, basis=None, code=None,
                 window=None) -> FitReport:
    """OLS slope of log10(mean epsilon) against log10(lambda)."""
    lams, eps, _ = mean_curve(rows, decoder, basis, code)
    if window is not None:
        lo, hi = window
        keep = (lams >= lo * (1 - 1e-12)) & (lams <= hi * (1 + 1e-12))
        lams, eps = lams[keep], eps[keep]
    else:
        lo, hi = (float(lams.min()), float(lams.max())) if lams.size else (0.0, 0.0)
    if lams.size < 2:
        raise LabError("need at least two lambda points inside the fit window")
    if np.any(lams <= 0):
        raise LabError("fit window must contain positive lambdas only")
    x = np.log10(lams)
    y = np.log10(np.maximum(eps, EPS_CLAMP))
    if lams.size > 3:  # polyfit needs n > order + 2 to estimate the covariance
        (slope, intercept), cov = np.polyfit(x, y, 1, cov=True)
    else:
        (slope, intercept), cov = np.polyfit(x, y, 1), np.full((2, 2), np.nan)
    return FitReport(float(slope), float(intercept), float(np.sqrt(cov[0, 0])),
                     (float(lo), float(hi)), int(lams.size))


def collapse_curve(rows, divisor: float, decoder=None, basis=None, code=None):
    """(lambdas, epsilon**(1/divisor)): curves with slope 2*divisor overlay."""
    if divisor <= 0:
        raise LabError("collapse divisor must be positive")
    lams, eps, _ = mean_curve(rows, decoder, basis, code)
    return lams, np.maximum(eps, EPS_CLAMP) ** (1.0 / divisor)


def collapse_spread(curves) -> float:
    """Max relative deviation between collapsed curves at shared lambdas."""
    common = set(np.round(curves[0][0], 12))
    for lams, _ in curves[1:]:
        common &= set(np.round(lams, 12))
    if not common:
        raise LabError("collapsed curves share no lambda values")
    worst = 0.0
    for lam in sorted(common):
        vals = []
        for lams, ys in curves:
            vals.append(ys[np.argmin(np.abs(lams - lam))])
        mid = np.mean(vals)
        if mid > 0:
            worst = max(worst, float((np.max(vals) - np.min(vals)) / mid))
    return worst


def emit_svg(rows, path, title="decoding error vs perturbation strength"):
    """Log-log scatter/line plot, one polyline per (code, decoder, basis)."""
    series = sorted({(r.code, r.decoder, r.basis) for r in rows})
    curves = {key: mean_curve(rows, decoder=key[1], basis=key[2], code=key[0])
              for key in series}
    xs = np.concatenate([c[0] for c in curves.values()])
    ys = np.concatenate([np.maximum(c[1], EPS_CLAMP) for c in curves.values()])
    if np.any(xs <= 0):
        raise LabError("log plot needs positive lambdas")
    lx, ly = np.log10(xs), np.log10(ys)
    x0, x1 = float(lx.min()), float(lx.max())
    y0, y1 = float(ly.min()), float(ly.max())
    x1 += 1e-9 if x1 == x0 else 0.0
    y1 += 1e-9 if y1 == y0 else 0.0
    width, height, margin = 640, 480, 60

    def to_px(lam, eps):
        fx = (np.log10(lam) - x0) / (x1 - x0)
        fy = (np.log10(eps) - y0) / (y1 - y0)
        return margin + fx * (width - 2 * margin), height - margin - fy * (height - 2 * margin)

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="24" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        'stroke="black"/>',
        f'<text x="{width / 2}" y="{height - 16}" text-anchor="middle" '
        'font-size="12">log10 lambda</text>',
        f'<text x="16" y="{height / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {height / 2})">log10 epsilon</text>',
    ]
    for k, (key, (lams, eps, _)) in enumerate(curves.items()):
        color = palette[k % len(palette)]
        pts = [to_px(lam, max(e, EPS_CLAMP)) for lam, e in zip(lams, eps)]
        coords = " ".join(f"{px:.2f},{py:.2f}" for px, py in pts)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                     'stroke-width="1.5"/>')
        for px, py in pts:
            parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="{color}"/>')
        label = "/".join(key)
        parts.append(f'<text x="{width - margin - 4}" y="{margin + 16 * (k + 1)}" '
                     f'text-anchor="end" font-size="11" fill="{color}">{label}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
