"""Deterministic stratified sampling of evaluation subsets.

An image's stratum is the stratum of its median object area (mean of the
two middle areas for even counts). Selection within a stratum is a pure
function of (dataset, seed): image ids are ordered by the 64-bit key
``splitmix64(seed XOR id-hash)`` ascending (ties broken by id) and the
first k are taken, so identical inputs give identical subsets on any
platform. Published seed-42 subsets drawn with unspecified generators are
NOT byte-reproducible by construction; this procedure is the reproducible
replacement and is what downstream results should be compared against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InsufficientStratumError, ValidationError
from .eval_metrics import STRATA, image_stratum
from .rng import selection_key

#: Default targets: 1,000 small / 2,000 medium / 2,000 large (20/40/40).
DEFAULT_TARGETS = {"small": 1000, "medium": 2000, "large": 2000}
DEFAULT_SEED = 42


@dataclass(frozen=True)
class StratificationPlan:
    targets: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_TARGETS))
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        for stratum, count in self.targets.items():
            if stratum not in STRATA:
                raise ValidationError(f"unknown stratum {stratum!r}", field="targets")
            if count < 0:
                raise ValidationError("stratum targets must be >= 0", field="targets")
        if sum(self.targets.values()) <= 0:
            raise ValidationError("plan must request at least one image", field="targets")


def _is_coco(doc: dict) -> bool:
    return "annotations" in doc and "images" in doc


def load_image_areas(path: str | Path) -> dict[int | str, list[float]]:
    """Map image id -> object areas, from either the native ground-truth
    format or a COCO instances file (bbox [x, y, w, h] -> corner form)."""
    doc = json.loads(Path(path).read_text("utf-8"))
    if not isinstance(doc, dict) or "images" not in doc:
        raise ValidationError("dataset must contain an 'images' list", field="dataset")
    areas: dict[int | str, list[float]] = {}
    if _is_coco(doc):
        for img in doc["images"]:
            areas[img["id"]] = []
        skipped = 0
        for ann in doc["annotations"]:
            x, y, w, h = ann["bbox"]
            x0, y0 = round(x), round(y)
            x1, y1 = round(x + w), round(y + h)
            if x1 <= x0 or y1 <= y0:
                skipped += 1  # degenerate after integer rounding
                continue
            areas.setdefault(ann["image_id"], []).append(float((x1 - x0) * (y1 - y0)))
    else:
        for img in doc["images"]:
            areas[img["id"]] = [
                float((o["bbox"][2] - o["bbox"][0]) * (o["bbox"][3] - o["bbox"][1]))
                for o in img.get("objects", [])
            ]
    return areas


def stratify_images(areas: dict[int | str, list[float]]) -> dict[str, list[int | str]]:
    """Group image ids by stratum; images with no objects are excluded."""
    strata: dict[str, list[int | str]] = {s: [] for s in STRATA}
    for image_id, image_areas in areas.items():
        if not image_areas:
            continue
        strata[image_stratum(image_areas)].append(image_id)
    return strata


def stratified_sample(
    dataset: str | Path | dict[int | str, list[float]],
    plan: StratificationPlan | None = None,
) -> list[int | str]:
    """Draw the planned subset; output ordering is stratum-major
    (small, medium, large), selection-key order within each stratum."""
    if plan is None:
        plan = StratificationPlan()
    areas = dataset if isinstance(dataset, dict) else load_image_areas(dataset)
    strata = stratify_images(areas)
    selected: list[int | str] = []
    for stratum in STRATA:
        k = plan.targets.get(stratum, 0)
        if k == 0:
            continue
        pool = strata[stratum]
        if len(pool) < k:
            raise InsufficientStratumError(stratum, available=len(pool), requested=k)
        ordered = sorted(pool, key=lambda i: (selection_key(plan.seed, i), str(i)))
        selected.extend(ordered[:k])
    return selected


def write_id_list(ids: list[int | str], path: str | Path) -> None:
    """One id per line, trailing newline; byte-stable for identical inputs."""
    Path(path).write_text("".join(f"{i}\n" for i in ids), "utf-8")
