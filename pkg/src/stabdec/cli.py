"""Command-line front end for code inspection, sweeps, fits, and plots."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import lab, qnn
from .codes import BUILTIN_CODE_NAMES, builtin_code, distance_audit, kl_check
from .encoding import LogicalSample, fix_gauge, make_noise_model, sample_logical_angles
from .spectral import build_hamiltonian, lowest_eigenpairs


def _parse_window(text: str) -> tuple[float, float]:
    parts = text.replace(",", " ").split()
    if len(parts) != 2:
        raise ValueError("window needs two values: LO HI")
    lo, hi = float(parts[0]), float(parts[1])
    if not 0 < lo < hi:
        raise ValueError("window needs 0 < LO < HI")
    return lo, hi


def _cmd_codes_list(args) -> int:
    for name in BUILTIN_CODE_NAMES:
        code = builtin_code(name)
        print(f"{name}: [[{code.n},1,{code.d}]], {len(code.stabilizers)} stabilizers")
    return 0


def _cmd_codes_audit(args) -> int:
    code = builtin_code(args.name)
    t = (code.d - 1) // 2
    kl = kl_check(code, t)
    ok = distance_audit(code)
    print(f"code: {code.name} [[{code.n},1,{code.d}]]")
    print(f"knill_laflamme_residual(p={t}): {kl:.3e}")
    print(f"distance_audit: {'pass' if ok else 'FAIL'}")
    return 0 if ok and kl <= 1e-10 else 1


def _apply_overrides(config: lab.SweepConfig, args) -> lab.SweepConfig:
    if getattr(args, "seed", None) is not None:
        config = replace(config, seed=args.seed)
    return config


def _cmd_sweep(args) -> int:
    config = _apply_overrides(lab.load_config(args.config), args)
    rows = lab.run_sweep(config, workers=args.workers, out=args.out)
    for r in rows:
        print(f"{r.code} {r.decoder} {r.basis} lambda={r.lam:g} "
              f"epsilon={r.epsilon:.6e} stderr={r.stderr:.2e}")
    if args.out:
        print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_fit(args) -> int:
    rows = lab.read_csv(args.csv)
    window = _parse_window(args.window) if args.window else None
    report = lab.fit_exponent(rows, decoder=args.decoder, basis=args.basis,
                              window=window)
    print(f"slope={report.slope:.4f} stderr={report.slope_stderr:.4f} "
          f"intercept={report.intercept:.4f} points={report.n_points} "
          f"window=[{report.window[0]:g},{report.window[1]:g}]")
    return 0


def _cmd_collapse(args) -> int:
    curves = []
    for path in args.csv:
        rows = lab.read_csv(path)
        code = builtin_code(rows[0].code)
        divisor = args.divisor if args.divisor else code.d + 1
        lams, ys = lab.collapse_curve(rows, divisor, decoder=args.decoder,
                                      basis=args.basis)
        curves.append((lams, ys))
        print(f"{path}: code={code.name} divisor={divisor:g}")
        for lam, y in zip(lams, ys):
            print(f"  lambda={lam:g} collapsed={y:.6e}")
    if len(curves) > 1:
        print(f"max_relative_spread={lab.collapse_spread(curves):.4f}")
    return 0


def _cmd_plot(args) -> int:
    rows = lab.read_csv(args.csv)
    lab.emit_svg(rows, args.out)
    print(f"wrote {args.out}")
    return 0


def _qnn_context(config: lab.SweepConfig):
    """Perturbed groundspace basis and noise model at the first lambda."""
    ss = np.random.SeedSequence(entropy=config.seed, spawn_key=(0, 0))
    pert_ss, sample_ss, train_ss = ss.spawn(3)
    code = builtin_code(config.code)
    pert = lab._make_perturbation(config, code, np.random.default_rng(pert_ss))
    spectral = lowest_eigenpairs(build_hamiltonian(code, pert, config.lambdas[0]), 3)
    basis = fix_gauge(spectral, code)
    noise = make_noise_model(code, config.noise_p)
    return code, basis, noise, sample_ss, train_ss


def _cmd_qnn_train(args) -> int:
    config = _apply_overrides(lab.load_config(args.config), args)
    code, basis, noise, sample_ss, train_ss = _qnn_context(config)
    rng = np.random.default_rng(sample_ss)
    sample_logical_angles(rng, config.samples)  # validation draw comes first
    train_samples = [LogicalSample(th, ph)
                     for th, ph in sample_logical_angles(rng, config.train_samples)]
    tc = qnn.TrainConfig(max_iterations=config.max_iterations, tol=config.tol,
                         restarts=config.restarts,
                         seed=int(train_ss.generate_state(1)[0]))
    model = qnn.build_circuit(code.n, config.qnn_depth, config.qnn_topology)
    trained, report = qnn.train(model, basis, train_samples, noise, tc, q=config.basis[0])
    print(f"final_loss={report.final_loss:.6e} iterations={report.iterations} "
          f"converged={report.converged}")
    if args.out:
        Path(args.out).write_text(qnn.model_to_text(trained, seed=config.seed, config=tc))
        print(f"wrote {args.out}")
    return 0


def _cmd_qnn_eval(args) -> int:
    config = _apply_overrides(lab.load_config(args.config), args)
    model = qnn.model_from_text(Path(args.model).read_text())
    _, basis, noise, sample_ss, _ = _qnn_context(config)
    rng = np.random.default_rng(sample_ss)
    samples = [LogicalSample(th, ph)
               for th, ph in sample_logical_angles(rng, config.samples)]
    eps, stderr = qnn.evaluate(model, basis, samples, noise, q=config.basis[0])
    print(f"epsilon={eps:.6e} stderr={stderr:.2e} samples={config.samples}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stabdec",
        description="decoder comparison for perturbed stabilizer groundspaces")
    sub = parser.add_subparsers(dest="command", required=True)

    codes_p = sub.add_parser("codes", help="inspect built-in codes")
    codes_sub = codes_p.add_subparsers(dest="subcommand", required=True)
    codes_sub.add_parser("list", help="list built-in codes").set_defaults(
        func=_cmd_codes_list)
    audit = codes_sub.add_parser("audit", help="verify code properties")
    audit.add_argument("name")
    audit.set_defaults(func=_cmd_codes_audit)

    sweep = sub.add_parser("sweep", help="run a lambda sweep from a config file")
    sweep.add_argument("config")
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--workers", type=int, default=1)
    sweep.add_argument("--out", default=None)
    sweep.set_defaults(func=_cmd_sweep)

    fit = sub.add_parser("fit", help="fit a power-law exponent to sweep output")
    fit.add_argument("csv")
    fit.add_argument("--decoder", default=None)
    fit.add_argument("--basis", default=None)
    fit.add_argument("--window", default=None, help='"LO HI" lambda range')
    fit.set_defaults(func=_cmd_fit)

    collapse = sub.add_parser("collapse", help="overlay rescaled error curves")
    collapse.add_argument("csv", nargs="+")
    collapse.add_argument("--decoder", default=None)
    collapse.add_argument("--basis", default=None)
    collapse.add_argument("--divisor", type=float, default=None,
                          help="exponent divisor (default: d+1 per code)")
    collapse.set_defaults(func=_cmd_collapse)

    plot = sub.add_parser("plot", help="render sweep output as SVG")
    plot.add_argument("csv")
    plot.add_argument("-o", "--out", required=True)
    plot.set_defaults(func=_cmd_plot)

    qnn_p = sub.add_parser("qnn", help="train or evaluate circuit decoders")
    qnn_sub = qnn_p.add_subparsers(dest="subcommand", required=True)
    train = qnn_sub.add_parser("train", help="train a model from a config file")
    train.add_argument("config")
    train.add_argument("--seed", type=int, default=None)
    train.add_argument("--out", default=None)
    train.set_defaults(func=_cmd_qnn_train)
    ev = qnn_sub.add_parser("eval", help="evaluate a saved model")
    ev.add_argument("model")
    ev.add_argument("config")
    ev.add_argument("--seed", type=int, default=None)
    ev.set_defaults(func=_cmd_qnn_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
