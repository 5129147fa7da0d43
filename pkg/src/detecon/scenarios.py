"""Deployment-scenario catalog and report generation.

Each report embeds every input it was computed from (scenario, catalog
version, ruleset version), so rerunning a report from its own embedded
inputs reproduces it byte for byte. Lifetime volume is daily volume times
the scenario's stated deployment horizon; annualization uses 365 days.

Published prose figures that contradict their own components are never
hard-coded into results: costs are recomputed from components and the
contradictions surface in ``discrepancy_notes`` (see ``reference``).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .breakeven import ccd
from .catalog import Catalog
from .cost_model import CostModelParams, tco_api, tco_supervised
from .decision import (
    DeploymentScenario,
    Recommendation,
    hybrid_cost,
    params_for_scenario,
    recommend,
)
from .errors import ValidationError
from .reference import check_scenario_claims

DAYS_PER_YEAR = 365


@dataclass
class ScenarioReport:
    scenario: DeploymentScenario
    lifetime_volume: int
    costs: dict[str, float]
    ccd_at_lifetime: dict[str, float | None]
    recommendation: Recommendation
    catalog_version: str
    params: CostModelParams
    discrepancy_notes: list[str]

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario.to_dict(),
            "lifetime_volume": self.lifetime_volume,
            "costs": dict(self.costs),
            "ccd_at_lifetime": dict(self.ccd_at_lifetime),
            "recommendation": self.recommendation.to_dict(),
            "catalog_version": self.catalog_version,
            "ruleset": self.recommendation.ruleset,
            "params": {
                "n_categories": self.params.n_categories,
                "n_images_per_category": self.params.n_images_per_category,
                "n_boxes_per_image": self.params.n_boxes_per_image,
                "price_per_box": self.params.price_per_box,
                "overhead_factor": self.params.overhead_factor,
                "training_cost": self.params.training_cost,
                "infrastructure_cost": self.params.infrastructure_cost,
                "supervised_per_image_cost": self.params.supervised_per_image_cost,
            },
            "discrepancy_notes": list(self.discrepancy_notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def load_scenarios(path: str | Path | None = None) -> list[DeploymentScenario]:
    """Load scenario presets; the shipped file encodes the six reference
    deployment contexts with their stated horizons."""
    if path is None:
        text = resources.files("detecon").joinpath("data/scenarios.json").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    doc = json.loads(text)
    items = doc["scenarios"] if isinstance(doc, dict) else doc
    return [DeploymentScenario.from_dict(s) for s in items]


def evaluate_scenario(
    scenario: DeploymentScenario,
    catalog: Catalog,
    params: CostModelParams | None = None,
) -> ScenarioReport:
    """Compute lifetime costs, CCDs, and a recommendation for one scenario."""
    if params is None:
        params = params_for_scenario(scenario, catalog)
    volume = scenario.lifetime_volume
    rec = recommend(scenario, catalog, params=params)
    novel = scenario.novel_category_share

    costs: dict[str, float] = {"supervised": tco_supervised(params, volume)}
    ccds: dict[str, float | None] = {}
    sup_profiles = catalog.supervised_profiles()
    sup_acc = sup_profiles[0].relevant_accuracy(novel) if sup_profiles else 0.0
    ccds["supervised"] = (
        ccd(costs["supervised"], volume, sup_acc) if volume >= 1 and sup_acc > 0 else None
    )
    for profile in catalog.api_profiles():
        costs[profile.name] = tco_api(profile, volume)
        acc = profile.relevant_accuracy(novel)
        ccds[profile.name] = ccd(costs[profile.name], volume, acc) if volume >= 1 and acc > 0 else None
    screening = rec.chosen_profile if rec.choice == "hybrid" else None
    if screening is None:
        api = catalog.api_profiles()
        screening = min(api, key=lambda p: p.api_price_per_image).name if api else None
    if screening is not None:
        costs["hybrid"] = hybrid_cost(params, catalog.profile(screening), volume)
        ccds["hybrid"] = (
            ccd(costs["hybrid"], volume, sup_acc) if volume >= 1 and sup_acc > 0 else None
        )

    notes = [
        f"{c.row}: printed {c.printed} vs recomputed {c.computed:.6g}. {c.note}".strip()
        for c in check_scenario_claims()
        if not c.matches
    ]
    return ScenarioReport(
        scenario=scenario,
        lifetime_volume=volume,
        costs=costs,
        ccd_at_lifetime=ccds,
        recommendation=rec,
        catalog_version=catalog.version,
        params=params,
        discrepancy_notes=notes,
    )


def _choice_label(rec: Recommendation) -> str:
    if rec.choice == "api":
        return rec.chosen_profile or "api"
    if rec.choice == "hybrid":
        return f"hybrid({rec.chosen_profile})" if rec.chosen_profile else "hybrid"
    return rec.choice


def compare_report(
    reports: list[ScenarioReport], fmt: str = "md"
) -> str:
    """Comparison table across scenarios, one row each, mirroring the
    reference scenario-table layout plus computed lifetime costs."""
    if not reports:
        raise ValidationError("at least one scenario report required", field="reports")
    if fmt not in ("md", "csv"):
        raise ValidationError(f"unsupported format {fmt!r}", field="fmt")
    header = [
        "scenario",
        "daily_volume",
        "categories",
        "budget_upfront",
        "accuracy_floor",
        "latency_budget_ms",
        "lifetime_days",
        "optimal",
        "supervised_cost",
        "cheapest_api_cost",
        "hybrid_cost",
    ]
    rows = []
    for r in reports:
        s = r.scenario
        api_costs = [
            v for k, v in r.costs.items() if k not in ("supervised", "hybrid")
        ]
        rows.append(
            [
                s.name,
                s.daily_volume,
                s.n_categories,
                "unlimited" if s.budget_upfront is None else f"{s.budget_upfront:g}",
                f"{s.accuracy_floor:g}",
                "any" if s.latency_budget_ms is None else f"{s.latency_budget_ms:g}",
                s.deployment_lifetime_days,
                _choice_label(r.recommendation),
                f"{r.costs['supervised']:.2f}",
                f"{min(api_costs):.2f}" if api_costs else "n/a",
                f"{r.costs['hybrid']:.2f}" if "hybrid" in r.costs else "n/a",
            ]
        )
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    lines = ["| " + " | ".join(header) + " |", "|---" * len(header) + "|"]
    for row in rows:
        lines.append("| " + " | ".join(str(c) for c in row) + " |")
    return "\n".join(lines) + "\n"


def write_reports(
    reports: list[ScenarioReport], out_dir: str | Path
) -> dict[str, Path]:
    """Write report.md, report.csv, and discrepancies.json into a directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "md": out / "report.md",
        "csv": out / "report.csv",
        "discrepancies": out / "discrepancies.json",
    }
    paths["md"].write_text(compare_report(reports, "md"), "utf-8")
    paths["csv"].write_text(compare_report(reports, "csv"), "utf-8")
    discrepancies = {
        "claims": [c.to_dict() for c in check_scenario_claims()],
        "per_scenario_notes": {r.scenario.name: r.discrepancy_notes for r in reports},
    }
    paths["discrepancies"].write_text(
        json.dumps(discrepancies, indent=2, sort_keys=True) + "\n", "utf-8"
    )
    return paths
