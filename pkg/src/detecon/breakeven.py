"""Break-even volumes, cost-per-correct-detection, and cost/efficiency curves.

All quantities here have closed forms because both cost models are affine
in volume; nothing is solved iteratively and curve points are exact
evaluations, never interpolations.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .cost_model import (
    CostModelParams,
    ModelProfile,
    PER_IMAGE_API,
    tco_api,
    tco_supervised,
    upfront_total,
)
from .errors import NoBreakEvenError, NoCrossoverError, UndefinedMetricError, ValidationError

#: Default volume grid for cost/efficiency tables: 1K to 200M inferences.
DEFAULT_VOLUME_GRID = (
    1_000,
    10_000,
    100_000,
    1_000_000,
    10_000_000,
    50_000_000,
    100_000_000,
    150_000_000,
    200_000_000,
)

DAYS_PER_YEAR = 365


@dataclass(frozen=True)
class BreakEvenResult:
    """Volume at which supervised and API total costs intersect."""

    volume: float
    daily_for_one_year: float
    cost_margin: float

    def to_dict(self) -> dict:
        return {
            "volume": self.volume,
            "daily_for_one_year": self.daily_for_one_year,
            "cost_margin": self.cost_margin,
        }


@dataclass(frozen=True)
class CcdPoint:
    n_inferences: int
    tco: float
    accuracy: float
    ccd: float

    @classmethod
    def at(cls, tco: float, n_inferences: int, accuracy: float) -> "CcdPoint":
        """Build a point with ccd = tco / (n x accuracy) by construction."""
        return cls(
            n_inferences=n_inferences,
            tco=tco,
            accuracy=accuracy,
            ccd=ccd(tco, n_inferences, accuracy),
        )


def break_even_volume(
    upfront: float, api_price: float, supervised_per_image: float = 0.0
) -> BreakEvenResult:
    """Volume N* where upfront + N*c equals N*p, i.e. N* = upfront / (p - c)."""
    if upfront < 0:
        raise ValidationError("upfront must be >= 0", field="upfront")
    if api_price < 0 or supervised_per_image < 0:
        raise ValidationError("per-image costs must be >= 0", field="api_price")
    margin = api_price - supervised_per_image
    if margin <= 0:
        raise NoBreakEvenError(
            f"no finite break-even: API price {api_price} does not exceed "
            f"supervised per-image cost {supervised_per_image}"
        )
    volume = upfront / margin
    return BreakEvenResult(
        volume=volume, daily_for_one_year=volume / DAYS_PER_YEAR, cost_margin=margin
    )


def ccd(tco: float, n_inferences: int, accuracy: float) -> float:
    """Cost per correct detection: total cost over successful detections."""
    if n_inferences < 1:
        raise ValidationError("n_inferences must be >= 1", field="n_inferences")
    if not 0.0 < accuracy <= 1.0:
        if accuracy == 0.0:
            raise UndefinedMetricError("CCD undefined at zero accuracy")
        raise ValidationError("accuracy must be in (0, 1]", field="accuracy")
    if tco < 0:
        raise ValidationError("tco must be >= 0", field="tco")
    return tco / (n_inferences * accuracy)


def ccd_supervised(params: CostModelParams, n: float, accuracy: float) -> float:
    return tco_supervised(params, n) / (n * accuracy)


def ccd_api(profile: ModelProfile, accuracy: float) -> float:
    """CCD of a pure per-image profile; constant in volume."""
    if accuracy <= 0:
        raise UndefinedMetricError("CCD undefined at zero accuracy")
    return profile.api_price_per_image / accuracy


def ccd_crossover(
    upfront: float,
    supervised_per_image: float,
    accuracy_supervised: float,
    api_price: float,
    accuracy_api: float,
) -> float:
    """Volume where supervised CCD falls to the API's constant CCD.

    Solves (upfront + c N) / (N a_sup) = p / a_api for N:
    N = upfront / (p a_sup / a_api - c).
    """
    if not 0 < accuracy_supervised <= 1 or not 0 < accuracy_api <= 1:
        raise ValidationError("accuracies must be in (0, 1]", field="accuracy")
    if upfront < 0:
        raise ValidationError("upfront must be >= 0", field="upfront")
    denom = api_price * accuracy_supervised / accuracy_api - supervised_per_image
    if denom <= 0:
        raise NoCrossoverError(
            "no CCD crossover: accuracy-adjusted API cost "
            f"{api_price * accuracy_supervised / accuracy_api} does not exceed "
            f"supervised per-image cost {supervised_per_image}"
        )
    return upfront / denom


@dataclass(frozen=True)
class CurveModel:
    """One column of a cost/efficiency curve: either an API profile or a
    supervised cost parameterization, plus the accuracy used for CCD."""

    name: str
    accuracy: float
    profile: ModelProfile | None = None
    params: CostModelParams | None = None

    def __post_init__(self):
        if (self.profile is None) == (self.params is None):
            raise ValidationError(
                "curve model needs exactly one of profile/params", field="model"
            )
        if not 0.0 < self.accuracy <= 1.0:
            raise ValidationError("accuracy must be in (0, 1]", field="accuracy")

    def tco(self, volume: float) -> float:
        if self.profile is not None:
            return tco_api(self.profile, volume)
        return tco_supervised(self.params, volume)


@dataclass(frozen=True)
class CurveRow:
    volume: int
    model: str
    tco: float
    ccd: float


def curve(models: list[CurveModel], volumes: list[int] | None = None) -> list[CurveRow]:
    """Evaluate TCO and CCD for each model at each volume.

    Rows are volume-major with models in input order, so output ordering is
    independent of any evaluation parallelism.
    """
    if volumes is None:
        volumes = list(DEFAULT_VOLUME_GRID)
    if not volumes:
        raise ValidationError("volume list must be non-empty", field="volumes")
    if any(v <= 0 for v in volumes):
        raise ValidationError("volumes must be positive", field="volumes")
    if any(b <= a for a, b in zip(volumes, volumes[1:])):
        raise ValidationError("volumes must be strictly increasing", field="volumes")
    if not models:
        raise ValidationError("model list must be non-empty", field="models")
    rows = []
    for v in volumes:
        for m in models:
            total = m.tco(v)
            rows.append(CurveRow(volume=v, model=m.name, tco=total, ccd=ccd(total, v, m.accuracy)))
    return rows


def curve_to_csv(rows: list[CurveRow]) -> str:
    """CSV with header volume,model,tco_usd,ccd_usd; row order as given."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["volume", "model", "tco_usd", "ccd_usd"])
    for r in rows:
        writer.writerow([r.volume, r.model, repr(r.tco), repr(r.ccd)])
    return buf.getvalue()


def break_even_for_params(params: CostModelParams, profile: ModelProfile) -> BreakEvenResult:
    """Break-even of a supervised parameterization against an API profile."""
    if profile.pricing_mode != PER_IMAGE_API:
        raise ValidationError("break-even requires an API-priced profile", field="profile")
    return break_even_volume(
        upfront_total(params), profile.api_price_per_image, params.supervised_per_image_cost
    )
