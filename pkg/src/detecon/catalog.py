"""Pricing catalog: named detector profiles plus system-scale cost presets.

The shipped catalog (``data/catalog.json``) encodes October-2024 public
pricing (Gemini Flash $0.00025/image with a 1,500/day free tier, GPT-4V
$0.01/image with 500/day) and five system-scale presets spanning 10 to 200
categories, including an expert-annotation medical variant at $1.00/box.

The enterprise preset is parameterized as 150 images/category x 2
boxes/image, the one factorization consistent with both its published image
count (30,000) and its published annotation total ($21,600).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .cost_model import CostModelParams, ModelProfile, PER_IMAGE_API, UPFRONT_AMORTIZED
from .errors import ValidationError


@dataclass(frozen=True)
class Catalog:
    version: str
    profiles: dict[str, ModelProfile]
    system_scales: dict[str, CostModelParams]

    def profile(self, name: str) -> ModelProfile:
        try:
            return self.profiles[name]
        except KeyError:
            raise ValidationError(f"unknown profile {name!r}", field="profile") from None

    def scale(self, name: str) -> CostModelParams:
        try:
            return self.system_scales[name]
        except KeyError:
            raise ValidationError(f"unknown system scale {name!r}", field="scale") from None

    def api_profiles(self) -> list[ModelProfile]:
        return [p for p in self.profiles.values() if p.pricing_mode == PER_IMAGE_API]

    def supervised_profiles(self) -> list[ModelProfile]:
        return [p for p in self.profiles.values() if p.pricing_mode == UPFRONT_AMORTIZED]

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "profiles": {
                name: {
                    "pricing_mode": p.pricing_mode,
                    "api_price_per_image": p.api_price_per_image,
                    "free_tier_daily_quota": p.free_tier_daily_quota,
                    "accuracy_coco": p.accuracy_coco,
                    "accuracy_novel_by_tier": dict(p.accuracy_novel_by_tier),
                    "latency_ms": p.latency_ms,
                }
                for name, p in self.profiles.items()
            },
            "system_scales": {
                name: {
                    "n_categories": s.n_categories,
                    "n_images_per_category": s.n_images_per_category,
                    "n_boxes_per_image": s.n_boxes_per_image,
                    "price_per_box": s.price_per_box,
                    "overhead_factor": s.overhead_factor,
                    "training_cost": s.training_cost,
                    "infrastructure_cost": s.infrastructure_cost,
                    "supervised_per_image_cost": s.supervised_per_image_cost,
                }
                for name, s in self.system_scales.items()
            },
        }


def _parse(doc: dict) -> Catalog:
    if not isinstance(doc, dict) or "profiles" not in doc:
        raise ValidationError("catalog document must contain a 'profiles' map", field="profiles")
    profiles = {}
    for name, fields in doc["profiles"].items():
        profiles[name] = ModelProfile(name=name, **fields)
    scales = {}
    for name, fields in doc.get("system_scales", {}).items():
        scales[name] = CostModelParams(**fields)
    return Catalog(
        version=str(doc.get("version", "unversioned")),
        profiles=profiles,
        system_scales=scales,
    )


def load_catalog(path: str | Path | None = None) -> Catalog:
    """Load a catalog file, or the shipped default when no path is given."""
    if path is None:
        text = resources.files("detecon").joinpath("data/catalog.json").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"catalog is not valid JSON: {exc}", field="catalog") from exc
    return _parse(doc)
