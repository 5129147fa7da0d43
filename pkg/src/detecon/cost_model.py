"""Total-cost-of-ownership models for supervised and API-priced detectors.

Two cost structures are modeled:

* supervised: a one-time upfront investment (annotation + training +
  infrastructure) followed by a small amortized per-image cost, so total
  cost is affine in inference volume;
* per-image API: no upfront cost, total cost strictly proportional to
  volume, optionally reduced by a daily free-tier quota.

All dollar amounts are computed in double precision and left unrounded;
rounding to cents happens only at presentation (``format_usd``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PricingModeError, ValidationError

UPFRONT_AMORTIZED = "upfront_amortized"
PER_IMAGE_API = "per_image_api"

#: Default amortized per-image cost of a self-hosted detector at high volume
#: (hardware replacement and maintenance spread over lifetime inferences).
DEFAULT_SUPERVISED_PER_IMAGE = 0.00004

#: Quality control (15%) plus platform fees (5%) on top of raw annotation labor.
DEFAULT_OVERHEAD_FACTOR = 1.20


@dataclass(frozen=True)
class CostModelParams:
    """Inputs of the supervised cost model.

    ``overhead_factor`` is a single multiplier on annotation labor; the
    15% quality-control / 5% platform-fee split it represents is
    documentation, not separate fields.
    """

    n_categories: int
    n_images_per_category: int
    n_boxes_per_image: float
    price_per_box: float
    overhead_factor: float = DEFAULT_OVERHEAD_FACTOR
    training_cost: float = 0.0
    infrastructure_cost: float = 0.0
    supervised_per_image_cost: float = DEFAULT_SUPERVISED_PER_IMAGE

    def __post_init__(self):
        if self.n_categories < 1:
            raise ValidationError("n_categories must be >= 1", field="n_categories")
        if self.n_images_per_category < 1:
            raise ValidationError(
                "n_images_per_category must be >= 1", field="n_images_per_category"
            )
        if self.n_boxes_per_image <= 0:
            raise ValidationError("n_boxes_per_image must be > 0", field="n_boxes_per_image")
        if self.price_per_box < 0:
            raise ValidationError("price_per_box must be >= 0", field="price_per_box")
        if self.overhead_factor < 1:
            raise ValidationError("overhead_factor must be >= 1", field="overhead_factor")
        for name in ("training_cost", "infrastructure_cost", "supervised_per_image_cost"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0", field=name)


@dataclass(frozen=True)
class ModelProfile:
    """Economic and performance identity of one detector.

    ``accuracy_novel_by_tier`` maps web-prevalence tiers (plus ``"overall"``)
    to accuracy on categories outside the training taxonomy; a supervised
    profile carries zeros there.
    """

    name: str
    pricing_mode: str
    api_price_per_image: float = 0.0
    free_tier_daily_quota: int = 0
    accuracy_coco: float = 0.0
    accuracy_novel_by_tier: dict[str, float] = field(default_factory=dict)
    latency_ms: float = 1.0

    def __post_init__(self):
        if self.pricing_mode not in (UPFRONT_AMORTIZED, PER_IMAGE_API):
            raise ValidationError(
                f"unknown pricing_mode {self.pricing_mode!r}", field="pricing_mode"
            )
        if self.pricing_mode == PER_IMAGE_API and self.api_price_per_image <= 0:
            raise ValidationError(
                "per_image_api profiles require api_price_per_image > 0",
                field="api_price_per_image",
            )
        if self.api_price_per_image < 0:
            raise ValidationError(
                "api_price_per_image must be >= 0", field="api_price_per_image"
            )
        if self.free_tier_daily_quota < 0:
            raise ValidationError(
                "free_tier_daily_quota must be >= 0", field="free_tier_daily_quota"
            )
        for label, value in [("accuracy_coco", self.accuracy_coco)] + [
            (f"accuracy_novel_by_tier[{k}]", v) for k, v in self.accuracy_novel_by_tier.items()
        ]:
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{label} must be in [0, 1]", field=label)
        if self.latency_ms <= 0:
            raise ValidationError("latency_ms must be > 0", field="latency_ms")

    @property
    def accuracy_novel_overall(self) -> float:
        return self.accuracy_novel_by_tier.get("overall", 0.0)

    def relevant_accuracy(self, novel_share: float) -> float:
        """Accuracy basis for a deployment: novel-category if any novel share, else standard."""
        return self.accuracy_novel_overall if novel_share > 0 else self.accuracy_coco


def annotation_cost(params: CostModelParams) -> float:
    """Total annotation spend: categories x images x boxes x price x overhead."""
    return (
        params.n_categories
        * params.n_images_per_category
        * params.n_boxes_per_image
        * params.price_per_box
        * params.overhead_factor
    )


def upfront_total(params: CostModelParams) -> float:
    """One-time investment before the first inference."""
    return annotation_cost(params) + params.training_cost + params.infrastructure_cost


def tco_supervised(params: CostModelParams, n_inferences: float) -> float:
    """Supervised TCO at a given volume: upfront plus amortized per-image cost."""
    if n_inferences < 0:
        raise ValidationError("n_inferences must be >= 0", field="n_inferences")
    return upfront_total(params) + n_inferences * params.supervised_per_image_cost


def tco_api(
    profile: ModelProfile,
    n_inferences: float,
    apply_free_tier: bool = False,
    deployment_days: int = 365,
) -> float:
    """API TCO at a given volume.

    The free-tier deduction is off by default: quoted annual costs in the
    shipped reference scenarios do not apply it, so applying it silently
    would make those figures irreproducible.
    """
    if profile.pricing_mode != PER_IMAGE_API:
        raise PricingModeError(
            f"profile {profile.name!r} is not API-priced (mode={profile.pricing_mode})"
        )
    if n_inferences < 0:
        raise ValidationError("n_inferences must be >= 0", field="n_inferences")
    if deployment_days < 1:
        raise ValidationError("deployment_days must be >= 1", field="deployment_days")
    billable = n_inferences
    if apply_free_tier:
        billable = max(0.0, n_inferences - profile.free_tier_daily_quota * deployment_days)
    return billable * profile.api_price_per_image


def format_usd(amount: float, cents: bool = True) -> str:
    """Presentation-only rounding, half-even to cents."""
    if cents:
        return f"${amount:,.2f}"
    return f"${amount:,.0f}"
