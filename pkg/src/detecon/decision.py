"""Rule-based architecture recommendation engine (ruleset-v1).

Rules fire in a fixed priority order, each one either eliminating
candidates or settling the choice, and every firing is recorded with the
concrete quantities that triggered it so a recommendation is auditable end
to end. ruleset-v1 encodes the published decision thresholds:

* R1 latency: an API profile whose measured latency exceeds the scenario's
  latency budget is eliminated (in practice any budget under ~300 ms, and
  certainly the sub-50 ms real-time class, removes hosted VLMs).
* R2 accuracy floor: floors above the human-review tolerance band
  (<= 75%, the documented ceiling for "VLM accuracy plus review backup")
  that also exceed an API profile's relevant accuracy eliminate that
  profile for pure use. Supervised accuracy is treated as trainable up to
  requirement (more annotation, not a different architecture), so floors
  never eliminate it.
* R3 taxonomy stability: any novel-category share, or category churn above
  5 additions/month, eliminates pure supervised (untrained classes are
  architecturally undetectable).
* R4 budget: upfront budget below the supervised upfront cost eliminates
  supervised.
* R5 volume: when both families survive, lifetime volume at or above the
  break-even volume selects supervised, below selects API.
* R6 API tie-break: among surviving API profiles prefer those meeting the
  accuracy floor (cheapest CCD wins); if none meets it, novel-category
  deployments pick the accuracy-maximal profile (accuracy is the binding
  constraint and review backup cannot cover never-seen classes), standard
  deployments pick the CCD-minimal one under review backup. Exact CCD ties
  break toward lower latency.
* R7 hybrid: a floor strictly between the best API accuracy and the
  supervised accuracy combined with prohibitive expert annotation
  (>= $1.00/box, the documented "economically prohibitive" price point)
  selects the hybrid screen-then-verify architecture.

The hybrid cost projection is the screening API's full-volume cost plus the
supervised upfront with annotation reduced by 70% (verification set only).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .breakeven import BreakEvenResult, break_even_for_params, ccd_api
from .catalog import Catalog
from .cost_model import (
    CostModelParams,
    ModelProfile,
    annotation_cost,
    tco_api,
    tco_supervised,
    upfront_total,
)
from .errors import NoBreakEvenError, ValidationError

RULESET_VERSION = "ruleset-v1"

#: Accuracy floor ceiling up to which VLM output plus human review is
#: considered serviceable for standard (non-novel) categories.
REVIEW_BACKUP_CEILING = 0.75

#: Per-box annotation price at and above which expert annotation is treated
#: as economically prohibitive.
PROHIBITIVE_PRICE_PER_BOX = 1.00

#: Monthly category additions above which a supervised taxonomy is
#: considered unstable (continuous retraining burden).
CHURN_LIMIT_PER_MONTH = 5.0

#: Share of annotation volume still required under the hybrid architecture.
HYBRID_ANNOTATION_SHARE = 0.30

SUPERVISED = "supervised"
HYBRID = "hybrid"
NONE = "none"
API = "api"


@dataclass(frozen=True)
class DeploymentScenario:
    name: str
    daily_volume: int
    n_categories: int
    budget_upfront: float | None  # None = unlimited
    accuracy_floor: float
    latency_budget_ms: float | None = None  # None = any
    category_additions_per_month: float = 0.0
    deployment_lifetime_days: int = 365
    novel_category_share: float = 0.0
    annotation_price_per_box: float = 0.30

    def __post_init__(self):
        if self.daily_volume < 0:
            raise ValidationError("daily_volume must be >= 0", field="daily_volume")
        if self.n_categories < 1:
            raise ValidationError("n_categories must be >= 1", field="n_categories")
        if self.budget_upfront is not None and self.budget_upfront < 0:
            raise ValidationError("budget_upfront must be >= 0", field="budget_upfront")
        if not 0.0 < self.accuracy_floor <= 1.0:
            raise ValidationError("accuracy_floor must be in (0, 1]", field="accuracy_floor")
        if self.latency_budget_ms is not None and self.latency_budget_ms <= 0:
            raise ValidationError("latency_budget_ms must be > 0", field="latency_budget_ms")
        if self.category_additions_per_month < 0:
            raise ValidationError(
                "category_additions_per_month must be >= 0",
                field="category_additions_per_month",
            )
        if self.deployment_lifetime_days < 1:
            raise ValidationError(
                "deployment_lifetime_days must be >= 1", field="deployment_lifetime_days"
            )
        if not 0.0 <= self.novel_category_share <= 1.0:
            raise ValidationError(
                "novel_category_share must be in [0, 1]", field="novel_category_share"
            )
        if self.annotation_price_per_box <= 0:
            raise ValidationError(
                "annotation_price_per_box must be > 0", field="annotation_price_per_box"
            )

    @property
    def lifetime_volume(self) -> int:
        return self.daily_volume * self.deployment_lifetime_days

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "daily_volume": self.daily_volume,
            "n_categories": self.n_categories,
            "budget_upfront": self.budget_upfront,
            "accuracy_floor": self.accuracy_floor,
            "latency_budget_ms": self.latency_budget_ms,
            "category_additions_per_month": self.category_additions_per_month,
            "deployment_lifetime_days": self.deployment_lifetime_days,
            "novel_category_share": self.novel_category_share,
            "annotation_price_per_box": self.annotation_price_per_box,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DeploymentScenario":
        import dataclasses

        allowed = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(doc) - allowed)
        if unknown:
            raise ValidationError(f"unknown scenario fields: {', '.join(unknown)}",
                                  field=unknown[0])
        required = {"name", "daily_volume", "n_categories", "budget_upfront", "accuracy_floor"}
        missing = sorted(required - set(doc))
        if missing:
            raise ValidationError(f"missing scenario fields: {', '.join(missing)}",
                                  field=missing[0])
        return cls(**doc)


@dataclass(frozen=True)
class RuleFiring:
    rule: str
    effect: str
    detail: str

    def to_dict(self) -> dict:
        return {"rule": self.rule, "effect": self.effect, "detail": self.detail}


@dataclass
class Recommendation:
    choice: str  # "supervised" | "api" | "hybrid" | "none"
    chosen_profile: str | None
    rationale: list[RuleFiring]
    breakeven: BreakEvenResult | None
    projected_costs: dict[str, float]
    ruleset: str = RULESET_VERSION
    catalog_version: str = "unversioned"

    @property
    def viable(self) -> bool:
        return self.choice != NONE

    def to_dict(self) -> dict:
        return {
            "choice": self.choice,
            "chosen_profile": self.chosen_profile,
            "rationale": [r.to_dict() for r in self.rationale],
            "breakeven": self.breakeven.to_dict() if self.breakeven else None,
            "projected_costs": dict(self.projected_costs),
            "ruleset": self.ruleset,
            "catalog_version": self.catalog_version,
        }


def recommendation_markdown(scenario: DeploymentScenario, rec: "Recommendation") -> str:
    """Human-readable brief for one recommendation."""
    choice = rec.chosen_profile or rec.choice
    if rec.choice == HYBRID:
        choice = f"hybrid: {rec.chosen_profile} screening + supervised verification"
    elif rec.choice == NONE:
        choice = "no viable architecture"
    lines = [
        f"## {scenario.name}",
        "",
        f"**Recommendation: {choice}**  ({rec.ruleset}, catalog {rec.catalog_version})",
        "",
        f"- daily volume {scenario.daily_volume:,}, {scenario.n_categories} categories, "
        f"floor {scenario.accuracy_floor:.0%}, lifetime {scenario.deployment_lifetime_days} days",
    ]
    if rec.breakeven is not None:
        lines.append(
            f"- break-even vs cheapest API: {rec.breakeven.volume:,.0f} images "
            f"({rec.breakeven.daily_for_one_year:,.0f}/day for one year)"
        )
    lines.append("- projected lifetime costs: "
                 + ", ".join(f"{k} ${v:,.2f}" for k, v in rec.projected_costs.items()))
    lines.append("")
    lines.append("Fired rules:")
    for firing in rec.rationale:
        lines.append(f"1. `{firing.rule}` {firing.effect}: {firing.detail}")
    return "\n".join(lines) + "\n"


def params_for_scenario(
    scenario: DeploymentScenario, catalog: Catalog
) -> CostModelParams:
    """Supervised cost parameterization implied by a scenario.

    Category count and per-box price come from the scenario; images/boxes
    per category use the standard defaults (100 images, 3 boxes) and the
    training/infrastructure presets come from the smallest system scale
    covering the category count.
    """
    scale = None
    for name in ("small", "medium", "large", "enterprise"):
        preset = catalog.system_scales.get(name)
        if preset is not None and scenario.n_categories <= preset.n_categories:
            scale = preset
            break
    if scale is None:
        scale = catalog.system_scales.get("enterprise") or next(
            iter(catalog.system_scales.values())
        )
    return CostModelParams(
        n_categories=scenario.n_categories,
        n_images_per_category=100,
        n_boxes_per_image=3.0,
        price_per_box=scenario.annotation_price_per_box,
        overhead_factor=1.20,
        training_cost=scale.training_cost,
        infrastructure_cost=scale.infrastructure_cost,
        supervised_per_image_cost=scale.supervised_per_image_cost,
    )


def hybrid_upfront(params: CostModelParams) -> float:
    """Upfront cost of the hybrid architecture: annotation volume reduced by
    70% (verification set only) plus full training and infrastructure."""
    return (
        annotation_cost(params) * HYBRID_ANNOTATION_SHARE
        + params.training_cost
        + params.infrastructure_cost
    )


def hybrid_cost(
    params: CostModelParams, screening: ModelProfile, lifetime_volume: float
) -> float:
    """Screen-then-verify projection: full-volume API screening plus the
    reduced supervised upfront."""
    return tco_api(screening, lifetime_volume) + hybrid_upfront(params)


def recommend(
    scenario: DeploymentScenario,
    catalog: Catalog,
    params: CostModelParams | None = None,
) -> Recommendation:
    """Apply ruleset-v1 to a scenario and return an auditable recommendation."""
    api_profiles = catalog.api_profiles()
    supervised_profiles = catalog.supervised_profiles()
    if not api_profiles or not supervised_profiles:
        raise ValidationError(
            "catalog must contain at least one supervised and one API profile",
            field="catalog",
        )
    if params is None:
        params = params_for_scenario(scenario, catalog)
    supervised_profile = supervised_profiles[0]
    upfront = upfront_total(params)
    volume = scenario.lifetime_volume
    novel = scenario.novel_category_share

    fired: list[RuleFiring] = []
    alive_api = list(api_profiles)
    supervised_alive = True

    def record(rule: str, effect: str, detail: str) -> None:
        fired.append(RuleFiring(rule=rule, effect=effect, detail=detail))

    # Break-even against the cheapest API profile; None when margin <= 0.
    cheapest_api = min(alive_api, key=lambda p: p.api_price_per_image)
    try:
        breakeven = break_even_for_params(params, cheapest_api)
    except NoBreakEvenError:
        breakeven = None

    # Projected lifetime costs for every architecture, kept regardless of outcome.
    screening = min(
        alive_api, key=lambda p: (ccd_api(p, p.relevant_accuracy(novel) or 1.0), p.latency_ms)
    )
    projected: dict[str, float] = {SUPERVISED: tco_supervised(params, volume)}
    for p in api_profiles:
        projected[p.name] = tco_api(p, volume)
    projected[HYBRID] = hybrid_cost(params, screening, volume)

    if scenario.daily_volume == 0:
        record("R0-volume", "no-viable", "daily volume is 0: nothing to detect")
        return Recommendation(
            choice=NONE,
            chosen_profile=None,
            rationale=fired,
            breakeven=breakeven,
            projected_costs=projected,
            catalog_version=catalog.version,
        )

    # R1: latency budget vs measured per-image latency.
    if scenario.latency_budget_ms is not None:
        for p in list(alive_api):
            if p.latency_ms > scenario.latency_budget_ms:
                alive_api.remove(p)
                record(
                    "R1-latency",
                    f"eliminate {p.name}",
                    f"latency {p.latency_ms} ms exceeds budget {scenario.latency_budget_ms} ms",
                )
        if supervised_profile.latency_ms > scenario.latency_budget_ms:
            supervised_alive = False
            record(
                "R1-latency",
                "eliminate supervised",
                f"latency {supervised_profile.latency_ms} ms exceeds budget "
                f"{scenario.latency_budget_ms} ms",
            )

    # R2: hard accuracy floors eliminate API profiles for pure use.
    floor = scenario.accuracy_floor
    if floor > REVIEW_BACKUP_CEILING:
        for p in list(alive_api):
            acc = p.relevant_accuracy(novel)
            if floor > acc:
                alive_api.remove(p)
                record(
                    "R2-accuracy-floor",
                    f"eliminate {p.name}",
                    f"floor {floor:.2f} exceeds review ceiling {REVIEW_BACKUP_CEILING:.2f} "
                    f"and profile accuracy {acc:.3f}",
                )
    if floor > supervised_profile.accuracy_coco and supervised_alive:
        record(
            "R2-accuracy-floor",
            "note",
            f"floor {floor:.2f} exceeds measured supervised accuracy "
            f"{supervised_profile.accuracy_coco:.3f}; treated as attainable via extended "
            "annotation investment",
        )

    # R3/R4 run unconditionally so the rationale records every violated
    # constraint, not just the first one that happened to eliminate.
    # R3: taxonomy stability.
    if novel > 0:
        supervised_alive = False
        record(
            "R3-taxonomy",
            "eliminate supervised",
            f"novel-category share {novel:.2f} > 0: untrained classes are undetectable "
            "by a fixed-taxonomy detector",
        )
    if scenario.category_additions_per_month > CHURN_LIMIT_PER_MONTH:
        supervised_alive = False
        record(
            "R3-taxonomy",
            "eliminate supervised",
            f"category churn {scenario.category_additions_per_month}/month exceeds "
            f"{CHURN_LIMIT_PER_MONTH}/month",
        )

    # R4: upfront budget.
    if scenario.budget_upfront is not None and scenario.budget_upfront < upfront:
        supervised_alive = False
        record(
            "R4-budget",
            "eliminate supervised",
            f"upfront cost ${upfront:,.0f} exceeds budget ${scenario.budget_upfront:,.0f}",
        )

    # R7 precondition, evaluated once: hybrid applicability. The screening
    # stage sits in the latency path, so it must fit the budget too.
    best_api_acc = max((p.relevant_accuracy(novel) for p in api_profiles), default=0.0)
    hybrid_applies = (
        best_api_acc < floor <= supervised_profile.accuracy_coco
        and scenario.annotation_price_per_box >= PROHIBITIVE_PRICE_PER_BOX
        and (scenario.budget_upfront is None or hybrid_upfront(params) <= scenario.budget_upfront)
        and (scenario.latency_budget_ms is None or screening.latency_ms <= scenario.latency_budget_ms)
    )

    # R5: volume against break-even when both families remain.
    choice: str | None = None
    chosen_profile: str | None = None
    if supervised_alive and alive_api and breakeven is not None:
        if volume >= breakeven.volume:
            record(
                "R5-volume",
                "select supervised",
                f"lifetime volume {volume:,} >= break-even {breakeven.volume:,.0f}",
            )
            choice = SUPERVISED
        else:
            record(
                "R5-volume",
                "prefer API",
                f"lifetime volume {volume:,} < break-even {breakeven.volume:,.0f}",
            )
            supervised_alive = False
    elif supervised_alive and alive_api and breakeven is None:
        record(
            "R5-volume",
            "select supervised",
            "no finite break-even: API margin is not positive, supervised dominates at volume",
        )
        choice = SUPERVISED

    # R6: pick among surviving API profiles.
    if choice is None and alive_api:
        meeting = [p for p in alive_api if p.relevant_accuracy(novel) >= floor]
        pool = meeting
        if not meeting:
            if novel > 0:
                best = max(alive_api, key=lambda p: (p.relevant_accuracy(novel), -p.latency_ms))
                record(
                    "R6-api-choice",
                    f"select {best.name}",
                    f"no profile meets floor {floor:.2f} on novel categories; accuracy is "
                    f"the binding constraint, best is {best.relevant_accuracy(novel):.3f}",
                )
                choice, chosen_profile = API, best.name
            elif floor <= REVIEW_BACKUP_CEILING:
                pool = alive_api
                record(
                    "R6-api-choice",
                    "relax floor",
                    f"no profile meets floor {floor:.2f}; floor is within the review-backup "
                    f"ceiling {REVIEW_BACKUP_CEILING:.2f}, choosing on cost",
                )
        if choice is None and pool:
            best = min(
                pool,
                key=lambda p: (ccd_api(p, p.relevant_accuracy(novel) or 1.0), p.latency_ms),
            )
            record(
                "R6-api-choice",
                f"select {best.name}",
                f"minimal cost per correct detection "
                f"{ccd_api(best, best.relevant_accuracy(novel) or 1.0):.6f} USD "
                "(ties break toward lower latency)",
            )
            choice, chosen_profile = API, best.name

    if choice is None and supervised_alive:
        detail = "only surviving candidate"
        if breakeven is not None:
            detail += f"; lifetime volume {volume:,} vs break-even {breakeven.volume:,.0f}"
        record("R5-volume", "select supervised", detail)
        choice = SUPERVISED

    # R7: hybrid override; fires whenever applicable, regardless of the
    # volume-based pick (the prohibitive annotation price is what the
    # full-annotation supervised route cannot absorb).
    if hybrid_applies:
        record(
            "R7-hybrid",
            "select hybrid",
            f"floor {floor:.2f} lies in (best API accuracy {best_api_acc:.3f}, supervised "
            f"{supervised_profile.accuracy_coco:.3f}] and expert annotation at "
            f"${scenario.annotation_price_per_box:.2f}/box is prohibitive "
            f"(>= ${PROHIBITIVE_PRICE_PER_BOX:.2f}): screening via {screening.name} with "
            "supervised verification",
        )
        choice, chosen_profile = HYBRID, screening.name

    if choice is None:
        record(
            "R8-exhausted",
            "no-viable",
            "all architectures eliminated by the constraints above",
        )
        return Recommendation(
            choice=NONE,
            chosen_profile=None,
            rationale=fired,
            breakeven=breakeven,
            projected_costs=projected,
            catalog_version=catalog.version,
        )

    return Recommendation(
        choice=choice,
        chosen_profile=chosen_profile,
        rationale=fired,
        breakeven=breakeven,
        projected_costs=projected,
        catalog_version=catalog.version,
    )
