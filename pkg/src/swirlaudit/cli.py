"""Command-line interface: ``run``, ``figures``, and ``audit-external``.

Exit codes
----------
0   success (for ``run``: the counterexample was certified)
2   ``run`` completed but did not certify a counterexample
3   configuration or parameter validation error
4   I/O failure
5   malformed or mismatched input data
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from swirlaudit import __version__
from swirlaudit.audits import (
    AuditReport,
    check_compact_support,
    check_coordinatewise_relation,
    check_independent_support,
    check_uniformity,
    run_audit,
)
from swirlaudit.config import RunConfig, load_config
from swirlaudit.errors import ConfigError, SwirlAuditError
from swirlaudit.figures import render_scatter_svg, swirl_profile
from swirlaudit.reporting import (
    build_report,
    load_external_cloud,
    write_cloud_csv,
    write_profile_csv,
    write_report_json,
)
from swirlaudit.transforms import (
    LATENT_Z,
    LATENT_ZPRIME,
    apply_pipeline,
    sample_uniform_square,
)

EXIT_OK = 0
EXIT_NOT_CERTIFIED = 2
EXIT_CONFIG = 3
EXIT_IO = 4
EXIT_DATA = 5

_SQUARE = np.array([[-1.0, 1.0], [-1.0, 1.0]])


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value config file")
    common.add_argument("--out", metavar="DIR", help="output directory (overrides config)")
    common.add_argument("--seed", type=int, metavar="U64", help="seed (overrides config)")
    common.add_argument("--format", choices=["csv"], default="csv",
                        help="point-cloud format (default: csv)")
    common.add_argument("--report", choices=["json"], default="json",
                        help="report format (default: json)")

    parser = argparse.ArgumentParser(
        prog="swirlaudit",
        description="Generate the swirled-latent construction and audit "
                    "identifiability assumptions on it.",
    )
    parser.add_argument("--version", action="version", version=f"swirlaudit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", parents=[common],
                           help="run the pipeline plus the full audit")
    run_p.add_argument("--render", action="store_true",
                       help="also emit SVG scatters of the point clouds")
    run_p.add_argument("--degenerate-a", action="store_true", help=argparse.SUPPRESS)

    fig_p = sub.add_parser("figures", parents=[common],
                           help="emit point clouds and the swirl profile")
    fig_p.add_argument("--render", action="store_true",
                       help="also emit SVG scatters of the point clouds")

    ext_p = sub.add_parser("audit-external", parents=[common],
                           help="audit two user-supplied paired point clouds")
    ext_p.add_argument("z_csv", help="CSV point cloud of the reference representation")
    ext_p.add_argument("zprime_csv", help="CSV point cloud of the alternate representation")
    return parser


def _effective_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["output_dir"] = args.out
    if getattr(args, "degenerate_a", False):
        overrides["degenerate_a"] = True
        overrides["a"] = 0.0
    if overrides:
        cfg = cfg.with_overrides(**overrides)
    return cfg


def _generate(cfg: RunConfig):
    Z = sample_uniform_square(cfg.n, cfg.seed)
    X, Zp = apply_pipeline(cfg.mixing2(), cfg.mpa_params(), Z)
    return Z, X, Zp


def _emit_bundle(cfg: RunConfig, Z, X, Zp, render: bool) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_cloud_csv(out / "z.csv", Z.points, header="z1,z2")
    write_cloud_csv(out / "x.csv", X.points, header="x1,x2")
    write_cloud_csv(out / "zprime.csv", Zp.points, header="z1,z2")
    write_profile_csv(out / "swirl_profile.csv", swirl_profile(Z, Zp))
    if render:
        span = float(max(1.0, np.abs(X.points).max())) * 1.05
        render_scatter_svg(Z.points, out / "z.svg", title="sources Z")
        render_scatter_svg(X.points, out / "x.svg", axis_range=(-span, span),
                           title="observations X")
        render_scatter_svg(Zp.points, out / "zprime.svg", title="alternate sources Z'")
    return out


def _print_summary(document: dict) -> None:
    for entry in document["premises"]:
        status = {True: "PASS", False: "FAIL", None: "SKIPPED"}[entry["pass"]]
        print(f"premise {entry['name']:28s} {status}")
    print(f"uniformity p-value             {document['uniformity_pvalue']:.6g}")
    print(f"relation verdict               {document['relation']['verdict']}")
    print(f"counterexample certified       {document['counterexample_certified']}")


def _not_certified_category(report: AuditReport, degenerate: bool) -> str:
    if not report.premises_pass:
        return "premise-failure"
    if not report.uniformity_pass:
        return "uniformity-failure"
    return "degenerate-coordinate-wise" if degenerate else "conclusion-coordinate-wise"


def _cmd_run(cfg: RunConfig, render: bool) -> int:
    report = run_audit(
        cfg.mixing2(), cfg.mpa_params(), cfg.n, cfg.seed,
        bins_support=cfg.bins_support,
        bins_uniformity=cfg.bins_uniformity,
        bins_relation=cfg.bins_relation,
        functional_threshold=cfg.functional_threshold,
        alpha=cfg.alpha,
        l_max=cfg.l_max,
    )
    Z, X, Zp = _generate(cfg)
    out = _emit_bundle(cfg, Z, X, Zp, render)
    document = build_report(report, tool_version=__version__, config_dict=cfg.to_dict())
    write_report_json(out / "report.json", document)
    _print_summary(document)
    if report.counterexample_certified:
        return EXIT_OK
    category = _not_certified_category(report, cfg.degenerate_a)
    print(f"not certified: {category}", file=sys.stderr)
    return EXIT_NOT_CERTIFIED


def _cmd_figures(cfg: RunConfig, render: bool) -> int:
    Z, X, Zp = _generate(cfg)
    out = _emit_bundle(cfg, Z, X, Zp, render)
    print(f"figure bundle written to {out}")
    return EXIT_OK


def _cmd_audit_external(cfg: RunConfig, z_path: str, zp_path: str) -> int:
    Z = load_external_cloud(z_path, LATENT_Z)
    Zp = load_external_cloud(zp_path, LATENT_ZPRIME)
    if Z.n != Zp.n:
        print(f"error: row-count mismatch: {Z.n} vs {Zp.n}", file=sys.stderr)
        return EXIT_DATA

    z_ok, z_box = check_compact_support(Z, _SQUARE)
    zp_ok, zp_box = check_compact_support(Zp, _SQUARE)
    union_box = np.column_stack(
        [np.minimum(z_box[:, 0], zp_box[:, 0]), np.maximum(z_box[:, 1], zp_box[:, 1])]
    )
    is_z, frac_z = check_independent_support(Z, cfg.bins_support)
    is_zp, frac_zp = check_independent_support(Zp, cfg.bins_support)
    pvalue = check_uniformity(Zp, cfg.bins_uniformity)
    conclusion = check_coordinatewise_relation(
        Z, Zp, bins=cfg.bins_relation, threshold=cfg.functional_threshold
    )

    report = AuditReport(
        continuity_pass=False,
        continuity_max_ratio=float("nan"),
        sigma_algebra_pass=False,
        sigma_algebra_max_error=float("nan"),
        compact_support_pass=z_ok and zp_ok,
        support_box=union_box,
        independent_support_pass_z=is_z,
        independent_support_fraction_z=frac_z,
        independent_support_pass_zprime=is_zp,
        independent_support_fraction_zprime=frac_zp,
        uniformity_pvalue_zprime=pvalue,
        uniformity_alpha=cfg.alpha,
        conclusion=conclusion,
        parameters={"seed": None, "l_max": cfg.l_max},
    )
    not_applicable = "not-applicable: no analytic maps supplied"
    document = build_report(
        report,
        tool_version=__version__,
        config_dict={
            "z_csv": str(z_path), "zprime_csv": str(zp_path), "n": Z.n,
            "bins_support": cfg.bins_support, "bins_uniformity": cfg.bins_uniformity,
            "bins_relation": cfg.bins_relation,
            "functional_threshold": cfg.functional_threshold, "alpha": cfg.alpha,
        },
        skipped_premises={"continuity": not_applicable, "sigma-algebra": not_applicable},
    )
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_report_json(out / "report.json", document)
    _print_summary(document)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _effective_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "run":
            return _cmd_run(cfg, render=args.render)
        if args.command == "figures":
            return _cmd_figures(cfg, render=args.render)
        return _cmd_audit_external(cfg, args.z_csv, args.zprime_csv)
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SwirlAuditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entry_point() -> None:
    sys.exit(main())
