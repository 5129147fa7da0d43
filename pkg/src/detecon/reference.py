"""Reproduction of the published reference tables and the discrepancy report.

The published cost/efficiency tables are not fully consistent with their own
equations, so this module is the arbiter: every cell is recomputed from the
cost equations and compared against the printed number at the precision it
was printed with (half a unit in the last printed digit). Matching cells are
PASS, the rest are enumerated with both numbers; nothing is silently adopted
from print.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from importlib import resources

from .breakeven import break_even_for_params, ccd
from .catalog import Catalog
from .cost_model import annotation_cost, tco_api, tco_supervised, upfront_total

GEMINI = "gemini-flash-2.5"
GPT4 = "gpt-4v"
YOLO = "yolov8m"

#: Volume grid of the published cost/efficiency table.
GRID_SCALES = ("small", "medium", "large", "enterprise", "medical")


def load_reference_tables() -> dict:
    text = resources.files("detecon").joinpath("data/reference_tables.json").read_text("utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class CellCheck:
    """One printed cell compared against its recomputed value."""

    table: str
    row: str
    column: str
    printed: str
    printed_value: float | None
    computed: float | str
    matches: bool
    delta: float | None
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _check(table: str, row: str, column: str, cell: dict, computed: float, note: str = "") -> CellCheck:
    delta = computed - cell["value"]
    return CellCheck(
        table=table,
        row=row,
        column=column,
        printed=cell["printed"],
        printed_value=cell["value"],
        computed=computed,
        matches=abs(delta) <= cell["half_ulp"],
        delta=delta,
        note=note,
    )


def reproduce_cost_structure(catalog: Catalog) -> list[dict]:
    """Recompute the five-scale cost-structure table from the catalog presets."""
    gemini = catalog.profile(GEMINI)
    rows = []
    for scale in GRID_SCALES:
        params = catalog.scale(scale)
        be = break_even_for_params(params, gemini)
        rows.append(
            {
                "scale": scale,
                "categories": params.n_categories,
                "images": params.n_categories * params.n_images_per_category,
                "annotation": annotation_cost(params),
                "training_plus_infra": params.training_cost + params.infrastructure_cost,
                "total_upfront": upfront_total(params),
                "break_even_volume": be.volume,
                "break_even_daily": be.daily_for_one_year,
            }
        )
    return rows


def reproduce_efficiency_grid(catalog: Catalog, scale: str = "large") -> list[dict]:
    """Recompute the cost/efficiency grid: TCO and CCD per model per volume."""
    tables = load_reference_tables()
    volumes = tables["efficiency_grid"]["volumes"]
    params = catalog.scale(scale)
    yolo = catalog.profile(YOLO)
    gemini = catalog.profile(GEMINI)
    gpt4 = catalog.profile(GPT4)
    rows = []
    for v in volumes:
        yolo_tco = tco_supervised(params, v)
        gem_tco = tco_api(gemini, v)
        gpt_tco = tco_api(gpt4, v)
        cells = {
            "volume": v,
            "yolo_tco": yolo_tco,
            "yolo_ccd": ccd(yolo_tco, v, yolo.accuracy_coco),
            "gemini_tco": gem_tco,
            "gemini_ccd": ccd(gem_tco, v, gemini.accuracy_coco),
            "gpt4_tco": gpt_tco,
            "gpt4_ccd": ccd(gpt_tco, v, gpt4.accuracy_coco),
        }
        ccds = {"yolo": cells["yolo_ccd"], "gemini": cells["gemini_ccd"], "gpt4": cells["gpt4_ccd"]}
        cells["best_choice"] = min(ccds, key=ccds.get)
        rows.append(cells)
    return rows


def _eval_formula(expr: str) -> float:
    # Claims carry simple arithmetic only; evaluated with no names in scope.
    return float(eval(expr, {"__builtins__": {}}, {}))


def check_scenario_claims() -> list[CellCheck]:
    """Recompute each published scenario dollar figure from its own components."""
    checks = []
    for claim in load_reference_tables()["scenario_claims"]:
        computed = _eval_formula(claim["formula"])
        checks.append(
            _check(
                "scenario_claims",
                claim["id"],
                "amount",
                claim["printed"],
                computed,
                note=claim.get("contradiction", ""),
            )
        )
    return checks


def discrepancy_report(catalog: Catalog) -> dict:
    """Full reproduction report: every printed cell vs its recomputed value.

    Returns a machine-readable document with per-cell PASS/FAIL and a
    summary; ``mismatches`` enumerates every cell whose recomputation
    disagrees with print beyond print precision.
    """
    tables = load_reference_tables()
    checks: list[CellCheck] = []

    computed_rows = {r["scale"]: r for r in reproduce_cost_structure(catalog)}
    for ref_row in tables["cost_structure_rows"]:
        scale = ref_row["scale"]
        comp = computed_rows[scale]
        for column in (
            "annotation",
            "training_plus_infra",
            "total_upfront",
            "break_even_volume",
            "break_even_daily",
        ):
            checks.append(_check("cost_structure", scale, column, ref_row[column], comp[column]))
        if ref_row["images"] != comp["images"]:
            checks.append(
                CellCheck(
                    table="cost_structure",
                    row=scale,
                    column="images",
                    printed=str(ref_row["images"]),
                    printed_value=ref_row["images"],
                    computed=comp["images"],
                    matches=False,
                    delta=comp["images"] - ref_row["images"],
                    note="printed image count inconsistent with the preset parameterization",
                )
            )

    grid = tables["efficiency_grid"]
    computed_grid = reproduce_efficiency_grid(catalog)
    for i, volume in enumerate(grid["volumes"]):
        comp = computed_grid[i]
        for column, cells in grid["columns"].items():
            checks.append(_check("efficiency", f"volume={volume}", column, cells[i], comp[column]))
        printed_best = grid["best_choice"][i]
        checks.append(
            CellCheck(
                table="efficiency",
                row=f"volume={volume}",
                column="best_choice",
                printed=printed_best,
                printed_value=None,
                computed=comp["best_choice"],
                matches=printed_best == comp["best_choice"],
                delta=None,
            )
        )

    checks.extend(check_scenario_claims())

    mismatches = [c for c in checks if not c.matches]
    return {
        "catalog_version": catalog.version,
        "n_cells": len(checks),
        "n_matching": len(checks) - len(mismatches),
        "n_mismatching": len(mismatches),
        "cells": [c.to_dict() for c in checks],
        "mismatches": [c.to_dict() for c in mismatches],
    }


def format_report_lines(report: dict) -> list[str]:
    """Human-readable PASS/FAIL lines, both numbers shown."""
    lines = []
    for cell in report["cells"]:
        status = "PASS" if cell["matches"] else "FAIL"
        computed = cell["computed"]
        shown = f"{computed:.6g}" if isinstance(computed, float) else str(computed)
        lines.append(
            f"[{status}] {cell['table']} / {cell['row']} / {cell['column']}: "
            f"printed {cell['printed']} vs computed {shown}"
        )
    lines.append(
        f"{report['n_matching']}/{report['n_cells']} cells match print precision; "
        f"{report['n_mismatching']} discrepancies"
    )
    return lines
