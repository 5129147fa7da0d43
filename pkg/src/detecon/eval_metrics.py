"""Detection-quality metrics: IoU, thresholded accuracy, mean IoU, size strata.

Boxes use integer corner coordinates (x_min, y_min, x_max, y_max); width is
x_max - x_min, i.e. coordinates are edge positions, matching the detection
response schema. Matching is greedy by descending confidence within each
(image, category) group, each ground-truth box consumed at most once; with
one prediction per query (the evaluation protocol used for the shipped
benchmark figures) greedy matching is provably optimal, and the test suite
compares it against an exhaustive oracle on small cases.

Accuracy at threshold t is the fraction of ground-truth objects whose
matched prediction reaches IoU >= t; misses contribute 0 to mean IoU (a
detected-only mean is reported separately, clearly labeled).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ValidationError

DEFAULT_THRESHOLDS = (0.5, 0.7)

SMALL_AREA_MAX = 1024  # exclusive upper bound of the small stratum
MEDIUM_AREA_MAX = 9216  # inclusive upper bound of the medium stratum
STRATA = ("small", "medium", "large")


@dataclass(frozen=True)
class BoundingBox:
    x_min: int
    y_min: int
    x_max: int
    y_max: int

    def __post_init__(self):
        for name in ("x_min", "y_min", "x_max", "y_max"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValidationError(f"{name} must be an integer", field=name)
        if self.x_min >= self.x_max:
            raise ValidationError("x_min must be < x_max", field="x_min")
        if self.y_min >= self.y_max:
            raise ValidationError("y_min must be < y_max", field="y_min")
        if self.x_min < 0 or self.y_min < 0:
            raise ValidationError("coordinates must be >= 0", field="x_min")

    @property
    def width(self) -> int:
        return self.x_max - self.x_min

    @property
    def height(self) -> int:
        return self.y_max - self.y_min

    @property
    def area(self) -> int:
        return self.width * self.height

    def to_list(self) -> list[int]:
        return [self.x_min, self.y_min, self.x_max, self.y_max]


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union; 0.0 for disjoint boxes."""
    ix = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    iy = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    return inter / (a.area + b.area - inter)


def size_stratum(area: int) -> str:
    """Object-size stratum by pixel area: <1,024 small, 1,024..9,216 medium, >9,216 large."""
    if area < 0:
        raise ValidationError("area must be >= 0", field="area")
    if area < SMALL_AREA_MAX:
        return "small"
    if area <= MEDIUM_AREA_MAX:
        return "medium"
    return "large"


def image_stratum(areas: list[float]) -> str:
    """Stratum of an image = stratum of its median object area.

    The median of an even count is the mean of the two middle areas. This is
    the documented image-level stratification rule used by the sampler.
    """
    if not areas:
        raise ValidationError("image has no objects to stratify", field="areas")
    ordered = sorted(areas)
    mid = len(ordered) // 2
    if len(ordered) % 2:
        median = float(ordered[mid])
    else:
        median = (ordered[mid - 1] + ordered[mid]) / 2.0
    if median < SMALL_AREA_MAX:
        return "small"
    if median <= MEDIUM_AREA_MAX:
        return "medium"
    return "large"


@dataclass(frozen=True)
class GroundTruthObject:
    image_id: int | str
    category: str
    box: BoundingBox

    @property
    def area(self) -> int:
        return self.box.area


@dataclass(frozen=True)
class DetectionRecord:
    image_id: int | str
    category: str
    detected: bool
    confidence: float = 0.0
    box: BoundingBox | None = None
    latency_ms: float | None = None
    reasoning: str | None = None

    def __post_init__(self):
        if not self.detected:
            if self.confidence != 0.0:
                raise ValidationError(
                    "a non-detection must carry confidence 0.0", field="confidence"
                )
            if self.box is not None:
                raise ValidationError("a non-detection must not carry a box", field="box")
        else:
            if not 0.0 <= self.confidence <= 1.0:
                raise ValidationError("confidence must be in [0, 1]", field="confidence")
            if self.box is None:
                raise ValidationError("a detection must carry a box", field="box")
        if self.latency_ms is not None and self.latency_ms <= 0:
            raise ValidationError("latency_ms must be > 0", field="latency_ms")

    def to_dict(self) -> dict:
        doc: dict = {
            "image_id": self.image_id,
            "category": self.category,
            "detected": self.detected,
            "confidence": self.confidence,
        }
        if self.box is not None:
            doc["bounding_box"] = {
                "x_min": self.box.x_min,
                "y_min": self.box.y_min,
                "x_max": self.box.x_max,
                "y_max": self.box.y_max,
            }
        if self.reasoning is not None:
            doc["reasoning"] = self.reasoning
        if self.latency_ms is not None:
            doc["latency_ms"] = self.latency_ms
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "DetectionRecord":
        box = None
        if doc.get("bounding_box") is not None:
            bb = doc["bounding_box"]
            box = BoundingBox(bb["x_min"], bb["y_min"], bb["x_max"], bb["y_max"])
        return cls(
            image_id=doc["image_id"],
            category=doc["category"],
            detected=bool(doc["detected"]),
            confidence=float(doc.get("confidence", 0.0)),
            box=box,
            latency_ms=doc.get("latency_ms"),
            reasoning=doc.get("reasoning"),
        )


@dataclass
class StratumReport:
    n: int
    accuracy_at: dict[float, float]
    mean_iou: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "accuracy_at": {str(t): v for t, v in self.accuracy_at.items()},
            "mean_iou": self.mean_iou,
        }


@dataclass
class EvalReport:
    n_evaluated: int
    thresholds: tuple[float, ...]
    accuracy_at: dict[float, float]
    mean_iou: float
    mean_iou_detected_only: float | None
    per_stratum: dict[str, StratumReport]
    mean_latency_ms: float | None
    n_detections: int
    n_unmatched_predictions: int
    record_errors: list[str] = field(default_factory=list)
    ci_95: dict[str, tuple[float, float]] | None = None
    statistics: dict | None = None
    # per-object outcomes kept for downstream significance tests
    matched_ious: list[float] = field(default_factory=list)

    def correctness(self, threshold: float) -> list[int]:
        """Per ground-truth-object 0/1 correctness indicators at a threshold."""
        return [1 if v >= threshold else 0 for v in self.matched_ious]

    def to_dict(self, include_outcomes: bool = False) -> dict:
        doc: dict = {
            "n_evaluated": self.n_evaluated,
            "thresholds": list(self.thresholds),
            "accuracy_at": {str(t): v for t, v in self.accuracy_at.items()},
            "mean_iou": self.mean_iou,
            "mean_iou_detected_only": self.mean_iou_detected_only,
            "per_stratum": {k: v.to_dict() for k, v in self.per_stratum.items()},
            "mean_latency_ms": self.mean_latency_ms,
            "n_detections": self.n_detections,
            "n_unmatched_predictions": self.n_unmatched_predictions,
            "record_errors": list(self.record_errors),
        }
        if self.ci_95 is not None:
            doc["ci_95"] = {k: list(v) for k, v in self.ci_95.items()}
        if self.statistics is not None:
            doc["statistics"] = self.statistics
        if include_outcomes:
            doc["matched_ious"] = list(self.matched_ious)
        return doc


def _greedy_match(
    gt_boxes: list[BoundingBox], preds: list[DetectionRecord]
) -> list[tuple[int, int, float]]:
    """Match predictions to ground-truth boxes within one (image, category) group.

    Predictions are taken in descending confidence (input order breaks
    ties); each takes the unconsumed gt box with maximal IoU (>0). Returns
    (pred_index, gt_index, iou) triples.
    """
    order = sorted(range(len(preds)), key=lambda i: (-preds[i].confidence, i))
    consumed = [False] * len(gt_boxes)
    pairs = []
    for pi in order:
        pred = preds[pi]
        if not pred.detected:
            continue
        best_j, best_iou = -1, 0.0
        for j, gt_box in enumerate(gt_boxes):
            if consumed[j]:
                continue
            v = iou(pred.box, gt_box)
            if v > best_iou:
                best_j, best_iou = j, v
        if best_j >= 0:
            consumed[best_j] = True
            pairs.append((pi, best_j, best_iou))
    return pairs


def match_and_score(
    gt: list[GroundTruthObject],
    preds: list[DetectionRecord],
    thresholds: tuple[float, ...] = DEFAULT_THRESHOLDS,
) -> EvalReport:
    """Score predictions against ground truth.

    Ground-truth objects are the accuracy denominator; a prediction for an
    unknown image or category is collected as a record error and counted as
    unmatched. Aggregation runs in a fixed order (sorted group keys), so
    results do not depend on input shuffling of independent groups.
    """
    if not gt:
        raise ValidationError("ground truth must be non-empty", field="gt")
    for t in thresholds:
        if not 0.0 < t <= 1.0:
            raise ValidationError("thresholds must be in (0, 1]", field="thresholds")

    groups: dict[tuple[str, str], list[int]] = {}
    for i, obj in enumerate(gt):
        groups.setdefault((str(obj.image_id), obj.category), []).append(i)

    pred_groups: dict[tuple[str, str], list[DetectionRecord]] = {}
    record_errors: list[str] = []
    n_unmatched = 0
    known_images = {str(o.image_id) for o in gt}
    for p in preds:
        key = (str(p.image_id), p.category)
        if key not in groups:
            if str(p.image_id) not in known_images:
                record_errors.append(f"unknown image_id {p.image_id!r}")
            else:
                record_errors.append(
                    f"no ground truth for category {p.category!r} in image {p.image_id!r}"
                )
            if p.detected:
                n_unmatched += 1
            continue
        pred_groups.setdefault(key, []).append(p)

    matched_iou_per_gt = [0.0] * len(gt)
    matched_flag = [False] * len(gt)
    n_detections = 0
    for key in sorted(groups):
        gt_indices = groups[key]
        group_preds = pred_groups.get(key, [])
        n_detections += sum(1 for p in group_preds if p.detected)
        boxes = [gt[i].box for i in gt_indices]
        pairs = _greedy_match(boxes, group_preds)
        for _, gt_local, pair_iou in pairs:
            gi = gt_indices[gt_local]
            matched_iou_per_gt[gi] = pair_iou
            matched_flag[gi] = True
        n_unmatched += sum(1 for p in group_preds if p.detected) - len(pairs)

    def _summarize(indices: list[int]) -> tuple[dict[float, float], float]:
        n = len(indices)
        acc = {
            t: sum(1 for i in indices if matched_iou_per_gt[i] >= t) / n for t in thresholds
        }
        mean = sum(matched_iou_per_gt[i] for i in indices) / n
        return acc, mean

    all_indices = list(range(len(gt)))
    accuracy_at, mean_iou_all = _summarize(all_indices)

    detected_ious = [matched_iou_per_gt[i] for i in all_indices if matched_flag[i]]
    mean_detected = sum(detected_ious) / len(detected_ious) if detected_ious else None

    per_stratum = {}
    for stratum in STRATA:
        idx = [i for i in all_indices if size_stratum(gt[i].area) == stratum]
        if not idx:
            continue
        acc, mean = _summarize(idx)
        per_stratum[stratum] = StratumReport(n=len(idx), accuracy_at=acc, mean_iou=mean)

    latencies = [p.latency_ms for p in preds if p.latency_ms is not None]
    mean_latency = sum(latencies) / len(latencies) if latencies else None

    return EvalReport(
        n_evaluated=len(gt),
        thresholds=tuple(thresholds),
        accuracy_at=accuracy_at,
        mean_iou=mean_iou_all,
        mean_iou_detected_only=mean_detected,
        per_stratum=per_stratum,
        mean_latency_ms=mean_latency,
        n_detections=n_detections,
        n_unmatched_predictions=n_unmatched,
        record_errors=record_errors,
        matched_ious=matched_iou_per_gt,
    )


def exhaustive_match_count(
    gt_boxes: list[BoundingBox], preds: list[DetectionRecord], threshold: float
) -> int:
    """Oracle: maximum number of correct-at-threshold matches over all
    one-to-one assignments. Exponential; intended for <= 5 objects."""
    detected = [p for p in preds if p.detected]

    def best(pi: int, used: frozenset[int]) -> int:
        if pi == len(detected):
            return 0
        skip = best(pi + 1, used)
        take = 0
        for j, box in enumerate(gt_boxes):
            if j in used:
                continue
            if iou(detected[pi].box, box) >= threshold:
                take = max(take, 1 + best(pi + 1, used | {j}))
        return max(skip, take)

    return best(0, frozenset())


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------


def load_ground_truth(path: str | Path) -> tuple[list[GroundTruthObject], dict]:
    """Read the ground-truth JSON format.

    Returns the flat object list plus a per-image index:
    {image_id: {"width", "height", "areas": [...]}}.
    """
    doc = json.loads(Path(path).read_text("utf-8"))
    if "images" not in doc:
        raise ValidationError("ground truth file must contain 'images'", field="images")
    objects = []
    images = {}
    for img in doc["images"]:
        areas = []
        for obj in img.get("objects", []):
            bb = obj["bbox"]
            box = BoundingBox(bb[0], bb[1], bb[2], bb[3])
            objects.append(
                GroundTruthObject(image_id=img["id"], category=obj["category"], box=box)
            )
            areas.append(box.area)
        images[img["id"]] = {
            "width": img.get("width"),
            "height": img.get("height"),
            "areas": areas,
        }
    return objects, images


def load_predictions(path: str | Path) -> list[DetectionRecord]:
    doc = json.loads(Path(path).read_text("utf-8"))
    if not isinstance(doc, list):
        raise ValidationError("predictions file must be a JSON array", field="predictions")
    return [DetectionRecord.from_dict(d) for d in doc]


def dump_predictions(records: list[DetectionRecord], path: str | Path) -> None:
    Path(path).write_text(
        json.dumps([r.to_dict() for r in records], indent=2, sort_keys=True) + "\n", "utf-8"
    )


def _pct(v: float) -> str:
    return f"{100.0 * v:.1f}%"


def render_markdown(reports: dict[str, EvalReport]) -> str:
    """Markdown comparison table, metrics as rows and models as columns."""
    if not reports:
        raise ValidationError("no reports to render", field="reports")
    names = list(reports)
    lines = ["| Metric | " + " | ".join(names) + " |", "|---" * (len(names) + 1) + "|"]

    def row(label: str, fmt) -> None:
        lines.append(f"| {label} | " + " | ".join(fmt(reports[n]) for n in names) + " |")

    thresholds = reports[names[0]].thresholds
    for t in thresholds:
        row(
            f"Accuracy @ IoU {t}",
            lambda r, t=t: _pct(r.accuracy_at[t])
            + (
                f" [{_pct(r.ci_95[f'accuracy_at_{t}'][0])}, {_pct(r.ci_95[f'accuracy_at_{t}'][1])}]"
                if r.ci_95 and f"accuracy_at_{t}" in r.ci_95
                else ""
            ),
        )
    row("Mean IoU", lambda r: f"{r.mean_iou:.3f}")
    row(
        "Mean IoU (detected only)",
        lambda r: f"{r.mean_iou_detected_only:.3f}" if r.mean_iou_detected_only is not None else "n/a",
    )
    row(
        "Mean latency",
        lambda r: f"{r.mean_latency_ms:.1f} ms" if r.mean_latency_ms is not None else "n/a",
    )
    row("Successful detections", lambda r: f"{r.n_detections} / {r.n_evaluated}")
    for stratum in STRATA:
        if any(stratum in reports[n].per_stratum for n in names):
            for t in thresholds:
                row(
                    f"{stratum.capitalize()} objects @ IoU {t}",
                    lambda r, s=stratum, t=t: _pct(r.per_stratum[s].accuracy_at[t])
                    if s in r.per_stratum
                    else "n/a",
                )
    return "\n".join(lines) + "\n"
