"""detecon: cost-effectiveness analysis for object-detection deployments.

The package answers one question quantitatively: given a deployment's
volume, budget, accuracy and latency constraints, is a supervised detector
worth its annotation investment, or does a pay-per-image zero-shot VLM win?
It provides the cost models, break-even and cost-per-correct-detection
analytics, the detection-evaluation and statistics pipeline that feeds them
with measured accuracies, and a rule-based recommendation engine, behind a
CLI and a small JSON HTTP service.
"""

from .breakeven import (
    BreakEvenResult,
    CcdPoint,
    CurveModel,
    CurveRow,
    break_even_volume,
    ccd,
    ccd_crossover,
    curve,
)
from .catalog import Catalog, load_catalog
from .cost_model import (
    CostModelParams,
    ModelProfile,
    annotation_cost,
    tco_api,
    tco_supervised,
    upfront_total,
)
from .decision import DeploymentScenario, Recommendation, recommend
from .errors import (
    DeteconError,
    InsufficientStratumError,
    NoBreakEvenError,
    NoCrossoverError,
    PricingModeError,
    UndefinedMetricError,
    ValidationError,
)
from .eval_metrics import (
    BoundingBox,
    DetectionRecord,
    EvalReport,
    GroundTruthObject,
    iou,
    match_and_score,
    size_stratum,
)
from .sampler import StratificationPlan, stratified_sample
from .scenarios import ScenarioReport, evaluate_scenario, load_scenarios
from .stats import (
    ConfidenceInterval,
    PairedSample,
    bootstrap_ci,
    cohens_d,
    fleiss_kappa,
    paired_t_test,
    power_check,
)
from .vlm_parser import RawVlmResponse, parse_vlm_response

__version__ = "0.1.0"

__all__ = [
    "BoundingBox",
    "BreakEvenResult",
    "Catalog",
    "CcdPoint",
    "ConfidenceInterval",
    "CostModelParams",
    "CurveModel",
    "CurveRow",
    "DeploymentScenario",
    "DetectionRecord",
    "DeteconError",
    "EvalReport",
    "GroundTruthObject",
    "InsufficientStratumError",
    "ModelProfile",
    "NoBreakEvenError",
    "NoCrossoverError",
    "PairedSample",
    "PricingModeError",
    "RawVlmResponse",
    "Recommendation",
    "ScenarioReport",
    "StratificationPlan",
    "UndefinedMetricError",
    "ValidationError",
    "annotation_cost",
    "bootstrap_ci",
    "break_even_volume",
    "ccd",
    "ccd_crossover",
    "cohens_d",
    "curve",
    "evaluate_scenario",
    "fleiss_kappa",
    "iou",
    "load_catalog",
    "load_scenarios",
    "match_and_score",
    "paired_t_test",
    "parse_vlm_response",
    "power_check",
    "recommend",
    "size_stratum",
    "stratified_sample",
    "tco_api",
    "tco_supervised",
    "upfront_total",
]
