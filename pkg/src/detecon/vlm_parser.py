"""Parsing and validation of VLM detection responses.

Models are instructed to return bare JSON, but real responses routinely
arrive wrapped in markdown fences or surrounded by prose, so cleanup runs
before parsing and both the raw and cleaned text are retained for audit.
The parser is total: every input produces either a valid record or a typed
error, never an uncaught exception.

Out-of-bounds coordinates are rejected rather than clamped (clamping would
silently inflate accuracy); batch conversion counts such records as misses
and excludes them from any accuracy numerator. A ``clamp`` option exists
for sensitivity analysis only.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import DeteconError, ValidationError
from .eval_metrics import BoundingBox, DetectionRecord

MAX_REASONING_CHARS = 1024

_FENCE_RE = re.compile(r"```[a-zA-Z0-9_-]*\s*(.*?)```", re.DOTALL)


class ParseError(DeteconError):
    """Response text does not contain a parseable JSON object."""

    def __init__(self, message: str, snippet: str = ""):
        super().__init__(message)
        self.snippet = snippet[:200]


class BoundsError(DeteconError):
    """Coordinates fall outside the image."""


class GeometryError(DeteconError):
    """Box is inverted or degenerate (min >= max)."""


class RangeError(DeteconError):
    """Confidence outside [0, 1], or nonzero confidence on a non-detection."""


ERROR_CLASSES = ("ParseError", "BoundsError", "GeometryError", "RangeError")


@dataclass(frozen=True)
class RawVlmResponse:
    text: str
    image_width: int
    image_height: int
    category_queried: str
    image_id: int | str | None = None
    latency_ms: float | None = None

    def __post_init__(self):
        if self.image_width <= 0 or self.image_height <= 0:
            raise ValidationError("image dimensions must be positive", field="image_width")


def clean_response_text(text: str) -> str:
    """Strip markdown fences and surrounding prose around the JSON object."""
    stripped = text.strip()
    fences = _FENCE_RE.findall(stripped)
    if fences:
        stripped = fences[0].strip()
    if not stripped.startswith("{"):
        start = stripped.find("{")
        end = stripped.rfind("}")
        if start != -1 and end > start:
            stripped = stripped[start : end + 1]
    return stripped


def _require_int(doc: dict, key: str) -> int:
    v = doc.get(key)
    if isinstance(v, bool):
        raise ParseError(f"coordinate {key} is not a number", snippet=str(doc))
    if isinstance(v, int):
        return v
    # tolerate unambiguous integer-valued floats (e.g. 10.0) from sloppy emitters
    if isinstance(v, float) and v.is_integer():
        return int(v)
    raise ParseError(f"coordinate {key} missing or not an integer", snippet=str(doc))


def parse_vlm_response(raw: RawVlmResponse, clamp: bool = False) -> DetectionRecord:
    """Parse one response into a DetectionRecord.

    Raises ParseError / BoundsError / GeometryError / RangeError; the batch
    path catches these and records them per class.
    """
    cleaned = clean_response_text(raw.text)
    try:
        doc = json.loads(cleaned)
    except json.JSONDecodeError as exc:
        raise ParseError(f"response is not valid JSON: {exc}", snippet=cleaned) from exc
    if not isinstance(doc, dict):
        raise ParseError("response JSON is not an object", snippet=cleaned)
    detected = doc.get("detected")
    if not isinstance(detected, bool):
        raise ParseError("'detected' boolean missing", snippet=cleaned)

    reasoning = doc.get("reasoning")
    if reasoning is not None:
        reasoning = str(reasoning)[:MAX_REASONING_CHARS]

    confidence = doc.get("confidence", 0.0)
    if isinstance(confidence, bool) or not isinstance(confidence, (int, float)):
        raise RangeError(f"confidence is not a number: {confidence!r}")
    confidence = float(confidence)

    if not detected:
        if confidence != 0.0:
            raise RangeError(f"non-detection must carry confidence 0.0, got {confidence}")
        return DetectionRecord(
            image_id=raw.image_id,
            category=raw.category_queried,
            detected=False,
            confidence=0.0,
            latency_ms=raw.latency_ms,
            reasoning=reasoning,
        )

    if not 0.0 <= confidence <= 1.0:
        raise RangeError(f"confidence {confidence} outside [0, 1]")
    bb = doc.get("bounding_box")
    if not isinstance(bb, dict):
        raise ParseError("'bounding_box' object missing for a detection", snippet=cleaned)
    x_min = _require_int(bb, "x_min")
    y_min = _require_int(bb, "y_min")
    x_max = _require_int(bb, "x_max")
    y_max = _require_int(bb, "y_max")
    if x_min >= x_max or y_min >= y_max:
        raise GeometryError(
            f"inverted or empty box: ({x_min}, {y_min}, {x_max}, {y_max})"
        )
    if clamp:
        x_min = max(0, min(x_min, raw.image_width - 1))
        y_min = max(0, min(y_min, raw.image_height - 1))
        x_max = max(x_min + 1, min(x_max, raw.image_width))
        y_max = max(y_min + 1, min(y_max, raw.image_height))
    if x_min < 0 or y_min < 0 or x_max > raw.image_width or y_max > raw.image_height:
        raise BoundsError(
            f"box ({x_min}, {y_min}, {x_max}, {y_max}) exceeds image "
            f"{raw.image_width}x{raw.image_height}"
        )
    return DetectionRecord(
        image_id=raw.image_id,
        category=raw.category_queried,
        detected=True,
        confidence=confidence,
        box=BoundingBox(x_min, y_min, x_max, y_max),
        latency_ms=raw.latency_ms,
        reasoning=reasoning,
    )


@dataclass
class BatchResult:
    records: list[DetectionRecord]
    error_counts: dict[str, int]
    errors: list[dict]

    def to_error_summary(self) -> dict:
        return {
            "n_responses": len(self.records),
            "n_invalid": sum(self.error_counts.values()),
            "by_class": dict(self.error_counts),
            "errors": list(self.errors),
        }


def parse_batch(responses: list[RawVlmResponse], clamp: bool = False) -> BatchResult:
    """Parse many responses; invalid ones become misses and are tallied per
    error class. Never raises for malformed response content."""
    records: list[DetectionRecord] = []
    counts = {name: 0 for name in ERROR_CLASSES}
    errors: list[dict] = []
    for i, raw in enumerate(responses):
        try:
            records.append(parse_vlm_response(raw, clamp=clamp))
        except (ParseError, BoundsError, GeometryError, RangeError) as exc:
            cls = type(exc).__name__
            counts[cls] += 1
            errors.append(
                {
                    "index": i,
                    "image_id": raw.image_id,
                    "category": raw.category_queried,
                    "error_class": cls,
                    "message": str(exc),
                }
            )
            records.append(
                DetectionRecord(
                    image_id=raw.image_id,
                    category=raw.category_queried,
                    detected=False,
                    confidence=0.0,
                    latency_ms=raw.latency_ms,
                )
            )
    return BatchResult(records=records, error_counts=counts, errors=errors)


def load_responses_jsonl(path: str | Path) -> list[RawVlmResponse]:
    """Read a JSON-lines file of raw responses.

    Each line carries: text, image_width, image_height, category_queried,
    and (required for downstream evaluation) image_id.
    """
    responses = []
    for line_no, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"line {line_no} is not valid JSON: {exc}", field="responses")
        responses.append(
            RawVlmResponse(
                text=doc["text"],
                image_width=doc["image_width"],
                image_height=doc["image_height"],
                category_queried=doc["category_queried"],
                image_id=doc.get("image_id"),
                latency_ms=doc.get("latency_ms"),
            )
        )
    return responses
