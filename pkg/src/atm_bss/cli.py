"""Command-line front end: ``atm-bss generate|mix|separate|grad-check|train|evaluate``.

Exit codes: 0 success, 1 validation or file error, 2 numerical failure.
"""
import argparse
import sys
from pathlib import Path

import numpy as np

from . import criterion as mi
from . import separator as sep
from .errors import ATMError, LengthMismatch
from .io import ExperimentConfig, format_float, read_signals, write_signals
from .mixing import generate_sources, mix, validate_domain
from .optimizer import TrainConfig, evaluate_separation, train


def _out_dir(args, cfg):
    return Path(args.out if args.out is not None else cfg.output_dir)


def _coeffs(args, cfg):
    return sep.SeparatorCoeffs(args.w12, args.w21, cfg.mixing_k)


def cmd_generate(args, cfg, out):
    batch = generate_sources(cfg.source_n, cfg.source_spec(), cfg.source_seed)
    path = _out_dir(args, cfg) / "sources.csv"
    write_signals(path, batch)
    print(f"wrote {path} ({batch.n} samples)", file=out)


def cmd_mix(args, cfg, out):
    x = mix(read_signals(args.sources), cfg.mixing())
    path = _out_dir(args, cfg) / "observations.csv"
    write_signals(path, x)
    print(f"wrote {path} ({x.n} samples)", file=out)


def cmd_separate(args, cfg, out):
    x = validate_domain(read_signals(args.observations), cfg.mixing_k)
    w = _coeffs(args, cfg)
    y = sep.fixed_point_solve(x, w, cfg.solver())
    r1 = np.abs(y.ch1 - (x.ch1 - w.w12 * np.power(y.ch2, w.k)))
    r2 = np.abs(y.ch2 - (x.ch2 - w.w21 * np.power(y.ch1, 1.0 / w.k)))
    path = _out_dir(args, cfg) / "outputs.csv"
    write_signals(path, y)
    print(f"wrote {path} ({y.n} samples)", file=out)
    print(f"max_residual={format_float(max(r1.max(), r2.max()))}", file=out)
    print(f"mean_residual={format_float(0.5 * (r1.mean() + r2.mean()))}", file=out)


def grad_check(x, w, cfg):
    """Gradient report plus oracle comparisons; returns (report, lines, passed)."""
    report = mi.gradient(x, w, cfg.solver(), cfg.score_epsilon)
    fd_cfg = sep.FixedPointConfig(tol=min(cfg.solver_tol, 1e-12), max_iter=cfg.solver_max_iter)
    lines = []
    passed = True
    for name in mi.COEFFS:
        g = report[name]
        fd = mi.fd_oracle_jacobian_term(x, w, name, cfg.gradcheck_step, fd_cfg)
        rel = abs(fd - g.jacobian_term) / max(abs(g.jacobian_term), 1e-300)
        ok = rel < cfg.gradcheck_jacobian_rtol or fd == g.jacobian_term
        passed &= ok
        lines.append(f"check.{name}.jacobian_term_vs_fd rel_err={rel:.3e} "
                     f"tol={cfg.gradcheck_jacobian_rtol:g} {'PASS' if ok else 'FAIL'}")

        fd_h = mi.fd_oracle_entropy_term(x, w, name, cfg.gradcheck_entropy_step, fd_cfg)
        err = abs(fd_h - g.entropy_term)
        bound = max(cfg.gradcheck_entropy_atol, cfg.gradcheck_entropy_rtol * abs(fd_h))
        ok = err <= bound
        passed &= ok
        lines.append(f"check.{name}.entropy_term_vs_fd abs_err={err:.3e} "
                     f"bound={bound:.3g} {'PASS' if ok else 'FAIL'}")

        naive_rel = abs(g.naive_jacobian_term - g.jacobian_term) / max(abs(g.jacobian_term), 1e-300)
        if w.k == 1:
            ok = g.corrected_gradient == g.naive_gradient
            passed &= ok
            lines.append(f"check.{name}.corrected_equals_naive {'PASS' if ok else 'FAIL'}")
        else:
            lines.append(f"info.{name}.naive_partial_only_mismatch rel_diff={naive_rel:.3e}")
    return report, lines, passed


def cmd_gradcheck(args, cfg, out):
    x = validate_domain(read_signals(args.observations), cfg.mixing_k)
    report, lines, passed = grad_check(x, _coeffs(args, cfg), cfg)
    out.write(report.to_text())
    for line in lines:
        print(line, file=out)
    print(f"result={'PASS' if passed else 'FAIL'}", file=out)


def _train_cfg(cfg, variant):
    return TrainConfig(
        step_size=cfg.train_step_size,
        max_epochs=cfg.train_max_epochs,
        grad_tol=cfg.train_grad_tol,
        init_w=(cfg.train_init_w12, cfg.train_init_w21),
        variant=variant,
        k=cfg.mixing_k,
        solver=cfg.solver(),
        density_floor=cfg.score_epsilon,
    )


def _final_metrics(x, traj, cfg, sources, tag, out):
    w12, w21 = traj.final_w
    print(f"{tag}.stop_reason={traj.stop_reason}", file=out)
    print(f"{tag}.epochs={traj.records[-1].epoch}", file=out)
    print(f"{tag}.w12={format_float(w12)}", file=out)
    print(f"{tag}.w21={format_float(w21)}", file=out)
    print(f"{tag}.C={format_float(traj.records[-1].criterion)}", file=out)
    if sources is None:
        return None
    y = sep.fixed_point_solve(x, sep.SeparatorCoeffs(w12, w21, cfg.mixing_k), cfg.solver())
    metrics = evaluate_separation(y, sources)
    base = evaluate_separation(x, sources)
    for i in range(2):
        print(f"{tag}.sir_db.ch{i + 1}={format_float(metrics['sir_db'][i])}", file=out)
        print(f"{tag}.sir_improvement_db.ch{i + 1}="
              f"{format_float(metrics['sir_db'][i] - base['sir_db'][i])}", file=out)
    return metrics


def cmd_train(args, cfg, out):
    x = validate_domain(read_signals(args.observations), cfg.mixing_k)
    sources = read_signals(args.sources) if args.sources else None
    if sources is not None and sources.n != x.n:
        raise LengthMismatch(f"LengthMismatch: {x.n} observations vs {sources.n} sources")
    variant = cfg.train_variant
    traj = train(x, _train_cfg(cfg, variant))
    out_dir = _out_dir(args, cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "trajectory.csv"
    path.write_text(traj.to_csv())
    print(f"wrote {path} ({len(traj.records)} records)", file=out)
    _final_metrics(x, traj, cfg, sources, variant, out)

    if variant == "naive" or args.compare:
        other = "corrected" if variant == "naive" else "naive"
        traj_other = train(x, _train_cfg(cfg, other))
        _final_metrics(x, traj_other, cfg, sources, other, out)
        truth = np.array([cfg.mixing_a12, cfg.mixing_a21])
        for tag, t in ((variant, traj), (other, traj_other)):
            err = float(np.linalg.norm(t.final_w - truth))
            print(f"comparison.{tag}.coefficient_error={format_float(err)}", file=out)
    if traj.stop_reason == "domain_error":
        print(f"error: {traj.error}", file=sys.stderr)
        return 2
    return 0


def cmd_evaluate(args, cfg, out):
    metrics = evaluate_separation(read_signals(args.outputs), read_signals(args.sources))
    for i in range(2):
        print(f"sir_db.ch{i + 1}={format_float(metrics['sir_db'][i])}", file=out)
    for i in range(2):
        for j in range(2):
            print(f"corr.y{i + 1}.s{j + 1}={format_float(metrics['correlation'][i, j])}", file=out)


def build_parser():
    parser = argparse.ArgumentParser(prog="atm-bss", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="dotted key=value config file")
    common.add_argument("--out", help="output directory (overrides output.dir)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="draw sources.csv")
    p.set_defaults(func=cmd_generate)
    p = sub.add_parser("mix", parents=[common], help="mix sources into observations.csv")
    p.add_argument("sources")
    p.set_defaults(func=cmd_mix)
    for name, func, help_ in (("separate", cmd_separate, "solve outputs.csv for given coefficients"),
                              ("grad-check", cmd_gradcheck, "gradient report with oracle checks")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("observations")
        p.add_argument("--w12", type=float, required=True)
        p.add_argument("--w21", type=float, required=True)
        p.set_defaults(func=func)
    p = sub.add_parser("train", parents=[common], help="gradient descent, writes trajectory.csv")
    p.add_argument("observations")
    p.add_argument("--sources", help="sources CSV for SIR reporting")
    p.add_argument("--compare", action="store_true", help="also train the other gradient variant")
    p.set_defaults(func=cmd_train)
    p = sub.add_parser("evaluate", parents=[common], help="SIR and correlations of outputs vs sources")
    p.add_argument("outputs")
    p.add_argument("sources")
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None, out=None):
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
        return args.func(args, cfg, out) or 0
    except ATMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: file: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
