"""Command-line interface.

Machine-readable output (json/csv/md) goes to stdout or ``--output``; log
and progress text goes to stderr only, so piping structured output is
always safe. Exit codes: 0 success, 1 validation/usage error, 2 I/O error.
The default catalog path can be set via the ``DETECON_CATALOG`` environment
variable.
"""

from __future__ import annotations

import argparse
import csv as csv_mod
import io
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .breakeven import (
    DEFAULT_VOLUME_GRID,
    CurveModel,
    break_even_volume,
    curve,
    curve_to_csv,
)
from .catalog import load_catalog
from .cost_model import tco_api, tco_supervised, upfront_total
from .decision import DeploymentScenario, recommend
from .errors import DeteconError
from .eval_metrics import (
    load_ground_truth,
    load_predictions,
    match_and_score,
    render_markdown,
)
from .reference import discrepancy_report, format_report_lines, reproduce_cost_structure
from .sampler import StratificationPlan, stratified_sample, write_id_list
from .scenarios import compare_report, evaluate_scenario, load_scenarios, write_reports
from .stats import DEFAULT_BOOTSTRAP_ITERATIONS, compare_outcomes
from .vlm_parser import load_responses_jsonl, parse_batch

log = logging.getLogger("detecon")


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, "utf-8")
        log.info("wrote %s", output)
    else:
        sys.stdout.write(text)


def _dump(doc, output: str | None) -> None:
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", output)


def _volumes(arg: str | None) -> list[int]:
    if not arg:
        return list(DEFAULT_VOLUME_GRID)
    return [int(v.replace("_", "")) for v in arg.split(",") if v.strip()]


def _curve_models(catalog, args) -> list[CurveModel]:
    models = []
    for name in (args.profiles or "yolov8m,gemini-flash-2.5,gpt-4v").split(","):
        name = name.strip()
        profile = catalog.profile(name)
        if profile.pricing_mode == "per_image_api":
            models.append(CurveModel(name=name, accuracy=profile.accuracy_coco, profile=profile))
        else:
            params = catalog.scale(args.scale)
            models.append(CurveModel(name=name, accuracy=profile.accuracy_coco, params=params))
    return models


def cmd_tco(catalog, args) -> None:
    rows = []
    for volume in _volumes(args.volumes):
        row = {"volume": volume}
        if args.scale:
            params = catalog.scale(args.scale)
            row["supervised"] = tco_supervised(params, volume)
        for name in (args.profile or []):
            profile = catalog.profile(name)
            row[name] = tco_api(
                profile, volume, apply_free_tier=args.apply_free_tier, deployment_days=args.days
            )
        rows.append(row)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv_mod.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        _emit(buf.getvalue(), args.output)
    else:
        _dump(rows, args.output)


def cmd_breakeven(catalog, args) -> None:
    if args.scale:
        params = catalog.scale(args.scale)
        upfront = upfront_total(params)
        sup_cost = params.supervised_per_image_cost
    else:
        upfront = args.upfront
        sup_cost = args.sup_cost
    if args.profile:
        api_price = catalog.profile(args.profile).api_price_per_image
    else:
        api_price = args.api_price
    if upfront is None or api_price is None:
        raise DeteconError("provide --upfront/--api-price or --scale/--profile")
    result = break_even_volume(upfront, api_price, sup_cost)
    log.info(
        "break-even at %s images (%s/day for one year)",
        f"{result.volume:,.0f}",
        f"{result.daily_for_one_year:,.0f}",
    )
    _dump(result.to_dict(), args.output)


def cmd_ccd_curve(catalog, args) -> None:
    rows = curve(_curve_models(catalog, args), _volumes(args.volumes))
    if args.format == "json":
        _dump(
            [{"volume": r.volume, "model": r.model, "tco_usd": r.tco, "ccd_usd": r.ccd} for r in rows],
            args.output,
        )
    else:
        _emit(curve_to_csv(rows), args.output)


def cmd_evaluate(catalog, args) -> None:
    gt, _images = load_ground_truth(args.gt)
    thresholds = tuple(float(t) for t in args.thresholds.split(","))
    reports = {}
    for spec_arg in args.pred:
        name, _, path = spec_arg.partition("=")
        if not path:
            name, path = Path(spec_arg).stem, spec_arg
        preds = load_predictions(path)
        report = match_and_score(gt, preds, thresholds)
        if args.ci:
            from .stats import bootstrap_ci

            report.ci_95 = {
                f"accuracy_at_{t}": (
                    lambda ci: (ci.lo, ci.hi)
                )(bootstrap_ci(report.correctness(t), iterations=args.iterations, seed=args.seed))
                for t in thresholds
            }
            iou_ci = bootstrap_ci(report.matched_ious, iterations=args.iterations, seed=args.seed)
            report.ci_95["mean_iou"] = (iou_ci.lo, iou_ci.hi)
        reports[name] = report
    if len(reports) >= 2:
        names = list(reports)
        stats_block = {}
        for i in range(len(names)):
            for j in range(i + 1, len(names)):
                a, b = names[i], names[j]
                stats_block[f"{a}_vs_{b}"] = compare_outcomes(
                    reports[a].correctness(thresholds[0]),
                    reports[b].correctness(thresholds[0]),
                    label_a=a,
                    label_b=b,
                    iterations=args.iterations,
                    seed=args.seed,
                )
        for r in reports.values():
            r.statistics = stats_block
    if args.format == "md":
        _emit(render_markdown(reports), args.output)
    else:
        _dump({name: r.to_dict() for name, r in reports.items()}, args.output)


def cmd_stats(catalog, args) -> None:
    with open(args.csv, newline="", encoding="utf-8") as fh:
        reader = csv_mod.DictReader(fh)
        fields = reader.fieldnames or []
        if len(fields) < 2:
            raise DeteconError("paired-outcome CSV needs two columns")
        col_a, col_b = fields[0], fields[1]
        a, b = [], []
        for row in reader:
            a.append(float(row[col_a]))
            b.append(float(row[col_b]))
    _dump(
        compare_outcomes(a, b, col_a, col_b, iterations=args.iterations, seed=args.seed),
        args.output,
    )


def cmd_sample(catalog, args) -> None:
    plan = StratificationPlan(
        targets={"small": args.small, "medium": args.medium, "large": args.large},
        seed=args.seed,
    )
    ids = stratified_sample(args.dataset, plan)
    if args.output:
        write_id_list(ids, args.output)
        log.info("wrote %d ids to %s", len(ids), args.output)
    else:
        sys.stdout.write("".join(f"{i}\n" for i in ids))


def cmd_parse_vlm(catalog, args) -> None:
    responses = load_responses_jsonl(args.responses)
    result = parse_batch(responses, clamp=args.clamp)
    _emit(
        json.dumps([r.to_dict() for r in result.records], indent=2, sort_keys=True) + "\n",
        args.output,
    )
    if args.errors:
        Path(args.errors).write_text(
            json.dumps(result.to_error_summary(), indent=2, sort_keys=True) + "\n", "utf-8"
        )
        log.info("error summary written to %s", args.errors)


def _load_scenario(args, catalog) -> list[DeploymentScenario]:
    if args.preset:
        presets = {s.name: s for s in load_scenarios()}
        if args.preset == "all":
            return list(presets.values())
        if args.preset not in presets:
            raise DeteconError(
                f"unknown preset {args.preset!r}; available: {', '.join(presets)}"
            )
        return [presets[args.preset]]
    if args.scenario:
        return load_scenarios(args.scenario)
    raise DeteconError("provide --preset or --scenario FILE")


def cmd_decide(catalog, args) -> None:
    scenarios = _load_scenario(args, catalog)
    if args.format == "md":
        from .decision import recommendation_markdown

        briefs = [recommendation_markdown(s, recommend(s, catalog)) for s in scenarios]
        _emit("\n".join(briefs), args.output)
        return
    out = {s.name: recommend(s, catalog).to_dict() for s in scenarios}
    _dump(out if len(out) > 1 else next(iter(out.values())), args.output)


def cmd_scenario(catalog, args) -> None:
    scenarios = _load_scenario(args, catalog)
    reports = [evaluate_scenario(s, catalog) for s in scenarios]
    if args.out_dir:
        paths = write_reports(reports, args.out_dir)
        log.info("wrote %s", ", ".join(str(p) for p in paths.values()))
        return
    if args.format == "md":
        _emit(compare_report(reports, "md"), args.output)
    elif args.format == "csv":
        _emit(compare_report(reports, "csv"), args.output)
    else:
        _dump([r.to_dict() for r in reports], args.output)


def cmd_reproduce_tables(catalog, args) -> None:
    report = discrepancy_report(catalog)
    for line in format_report_lines(report):
        print(line, file=sys.stderr)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        rows = reproduce_cost_structure(catalog)
        buf = io.StringIO()
        writer = csv_mod.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        (out / "cost_structure.csv").write_text(buf.getvalue(), "utf-8")
        (out / "efficiency.csv").write_text(curve_to_csv(curve(_curve_models(catalog, args))), "utf-8")
        (out / "discrepancies.json").write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n", "utf-8"
        )
        log.info("wrote reproduction tables to %s", out)
    else:
        _dump(report, args.output)


def cmd_serve(catalog, args) -> None:
    import uvicorn

    from .service import create_app

    app = create_app(catalog)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detecon",
        description="Cost-effectiveness analysis for object-detection deployments",
    )
    parser.add_argument("--version", action="version", version=f"detecon {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--catalog",
        default=os.environ.get("DETECON_CATALOG"),
        help="pricing catalog JSON (default: shipped catalog, or $DETECON_CATALOG)",
    )
    common.add_argument("--format", choices=("json", "csv", "md"), default="json")
    common.add_argument("--output", help="write machine output to this file instead of stdout")
    common.add_argument("--seed", type=int, default=42, help="seed for randomized procedures")
    common.add_argument("-v", "--verbose", action="store_true")
    common.add_argument(
        "--threads", type=int, default=1, help="worker cap for parallel sections"
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add_cmd(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add_cmd("tco", "total cost of ownership at given volumes")
    p.add_argument("--scale", help="system-scale preset for the supervised column")
    p.add_argument("--profile", action="append", help="API profile name (repeatable)")
    p.add_argument("--volumes", help="comma-separated inference volumes")
    p.add_argument("--apply-free-tier", action="store_true")
    p.add_argument("--days", type=int, default=365, help="deployment days for the free tier")
    p.set_defaults(func=cmd_tco)

    p = add_cmd("breakeven", "volume where supervised and API costs equalize")
    p.add_argument("--upfront", type=float)
    p.add_argument("--api-price", type=float)
    p.add_argument("--sup-cost", type=float, default=0.0)
    p.add_argument("--scale", help="derive upfront/per-image cost from a system scale")
    p.add_argument("--profile", help="derive the API price from a catalog profile")
    p.set_defaults(func=cmd_breakeven)

    p = add_cmd("ccd-curve", "cost per correct detection across volumes")
    p.add_argument("--profiles", help="comma-separated model names")
    p.add_argument("--scale", default="large", help="system scale for supervised models")
    p.add_argument("--volumes", help="comma-separated inference volumes")
    p.set_defaults(func=cmd_ccd_curve)

    p = add_cmd("evaluate", "score predictions against ground truth")
    p.add_argument("--gt", required=True, help="ground-truth JSON file")
    p.add_argument(
        "--pred", action="append", required=True, help="NAME=predictions.json (repeatable)"
    )
    p.add_argument("--thresholds", default="0.5,0.7")
    p.add_argument("--ci", action="store_true", help="attach bootstrap confidence intervals")
    p.add_argument("--iterations", type=int, default=DEFAULT_BOOTSTRAP_ITERATIONS)
    p.set_defaults(func=cmd_evaluate)

    p = add_cmd("stats", "paired significance tests from a 2-column CSV")
    p.add_argument("--csv", required=True, help="CSV of paired outcomes (2 columns)")
    p.add_argument("--iterations", type=int, default=DEFAULT_BOOTSTRAP_ITERATIONS)
    p.set_defaults(func=cmd_stats)

    p = add_cmd("sample", "deterministic stratified image subset")
    p.add_argument("--dataset", required=True, help="ground-truth or COCO instances JSON")
    p.add_argument("--small", type=int, default=1000)
    p.add_argument("--medium", type=int, default=2000)
    p.add_argument("--large", type=int, default=2000)
    p.set_defaults(func=cmd_sample)

    p = add_cmd("parse-vlm", "parse raw VLM responses into predictions")
    p.add_argument("--responses", required=True, help="JSON-lines file of raw responses")
    p.add_argument("--errors", help="write the error-summary JSON here")
    p.add_argument("--clamp", action="store_true", help="clamp out-of-bounds boxes (sensitivity)")
    p.set_defaults(func=cmd_parse_vlm)

    p = add_cmd("decide", "architecture recommendation for a scenario")
    p.add_argument("--preset", help="scenario preset name, or 'all'")
    p.add_argument("--scenario", help="scenario JSON file")
    p.set_defaults(func=cmd_decide)

    p = add_cmd("scenario", "full scenario cost/recommendation reports")
    p.add_argument("--preset", help="scenario preset name, or 'all'")
    p.add_argument("--scenario", help="scenario JSON file")
    p.add_argument("--out-dir", help="write report.md, report.csv, discrepancies.json here")
    p.set_defaults(func=cmd_scenario)

    p = add_cmd("reproduce-tables", "recompute the published reference tables and the discrepancy report")
    p.add_argument("--out-dir", help="write cost_structure.csv, efficiency.csv, discrepancies.json")
    p.add_argument("--profiles", help=argparse.SUPPRESS)
    p.add_argument("--scale", default="large", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_reproduce_tables)

    p = add_cmd("serve", "run the JSON HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; fold usage errors into 1
        return 0 if exc.code == 0 else 1
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.INFO,
        format="%(levelname)s %(message)s",
    )
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        catalog = load_catalog(args.catalog)
        args.func(catalog, args)
    except DeteconError as exc:
        log.error("%s", exc)
        return 1
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
