"""Stateless JSON HTTP facade over the cost, break-even, decision, and
scenario machinery.

Every response is wrapped in an envelope ``{"ok": bool, "data": ...}`` or
``{"ok": false, "error": {"code", "message", "field"}}`` and serialized
canonically (sorted keys, fixed separators), so responses for identical
requests are byte-identical across restarts. The only state is the catalog
loaded at startup; reload by restarting.
"""

from __future__ import annotations

import json
from typing import Any

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response

from .breakeven import CurveModel, break_even_volume, curve
from .catalog import Catalog, load_catalog
from .cost_model import PER_IMAGE_API
from .decision import DeploymentScenario, recommend
from .errors import (
    DeteconError,
    NoBreakEvenError,
    NoCrossoverError,
    PricingModeError,
    UndefinedMetricError,
    ValidationError,
)
from .scenarios import evaluate_scenario, load_scenarios


class CanonicalJSON(Response):
    media_type = "application/json"

    def render(self, content: Any) -> bytes:
        return (
            json.dumps(content, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"
        ).encode("utf-8")


def _ok(data: Any, status: int = 200) -> CanonicalJSON:
    return CanonicalJSON({"ok": True, "data": data}, status_code=status)


def _err(code: str, message: str, field: str | None = None, status: int = 400) -> CanonicalJSON:
    return CanonicalJSON(
        {"ok": False, "error": {"code": code, "message": message, "field": field}},
        status_code=status,
    )


def _require(body: dict, key: str, kind=None):
    if key not in body:
        raise ValidationError(f"missing required field '{key}'", field=key)
    value = body[key]
    if kind is not None and not isinstance(value, kind):
        raise ValidationError(f"field '{key}' has the wrong type", field=key)
    return value


def create_app(catalog: Catalog | None = None) -> FastAPI:
    catalog = catalog or load_catalog()
    scenario_presets = load_scenarios()
    app = FastAPI(title="detecon", version="1", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.exception_handler(DeteconError)
    async def _domain_error(_req, exc: DeteconError):
        code = {
            ValidationError: "validation_error",
            NoBreakEvenError: "no_break_even",
            NoCrossoverError: "no_crossover",
            PricingModeError: "pricing_mode",
            UndefinedMetricError: "undefined_metric",
        }.get(type(exc), "domain_error")
        return _err(code, str(exc), getattr(exc, "field", None), status=400)

    @app.exception_handler(404)
    async def _not_found(_req, _exc):
        return _err("not_found", "unknown route", status=404)

    @app.exception_handler(Exception)
    async def _internal(_req, _exc):
        # never leak stack detail
        return _err("internal", "internal error", status=500)

    async def _body(request: Request) -> dict:
        try:
            doc = await request.json()
        except Exception:
            raise ValidationError("request body must be a JSON object", field="body")
        if not isinstance(doc, dict):
            raise ValidationError("request body must be a JSON object", field="body")
        return doc

    @app.get("/v1/health")
    async def health():
        return _ok({"status": "healthy", "catalog_version": catalog.version, "api": "v1"})

    @app.get("/v1/catalog")
    async def get_catalog():
        return _ok(catalog.to_dict())

    @app.get("/v1/scenarios")
    async def get_scenarios():
        return _ok([s.to_dict() for s in scenario_presets])

    @app.post("/v1/breakeven")
    async def post_breakeven(request: Request):
        body = await _body(request)
        upfront = float(_require(body, "upfront", (int, float)))
        api_price = float(_require(body, "api_price", (int, float)))
        sup_cost = float(body.get("sup_cost", 0.0))
        result = break_even_volume(upfront, api_price, sup_cost)
        return _ok(result.to_dict())

    def _params(body: dict):
        if "scale" in body:
            return catalog.scale(body["scale"])
        from .cost_model import CostModelParams

        return CostModelParams(**_require(body, "params", dict))

    def _volumes(body: dict) -> list[int]:
        volumes = _require(body, "volumes", list)
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in volumes):
            raise ValidationError("volumes must be integers", field="volumes")
        return volumes

    @app.post("/v1/tco")
    async def post_tco(request: Request):
        body = await _body(request)
        volumes = _volumes(body)
        models = []
        if "scale" in body or "params" in body:
            params = _params(body)
            sup = catalog.supervised_profiles()
            acc = sup[0].accuracy_coco if sup else 1.0
            models.append(CurveModel(name="supervised", accuracy=acc, params=params))
        for name in body.get("profiles", []):
            profile = catalog.profile(name)
            if profile.pricing_mode != PER_IMAGE_API:
                raise ValidationError(
                    f"profile {name!r} is not API-priced; pass it via 'scale'/'params'",
                    field="profiles",
                )
            models.append(
                CurveModel(name=name, accuracy=profile.accuracy_coco or 1.0, profile=profile)
            )
        if not models:
            raise ValidationError("nothing to price: give 'scale', 'params' or 'profiles'",
                                  field="profiles")
        rows = curve(models, volumes)
        return _ok(
            [{"volume": r.volume, "model": r.model, "tco_usd": r.tco, "ccd_usd": r.ccd} for r in rows]
        )

    @app.post("/v1/ccd-curve")
    async def post_ccd_curve(request: Request):
        body = await _body(request)
        volumes = _volumes(body)
        models = []
        for entry in _require(body, "models", list):
            if not isinstance(entry, dict):
                raise ValidationError("each model entry must be an object", field="models")
            name = _require(entry, "name", str)
            profile = catalog.profile(name)
            accuracy = float(entry.get("accuracy", profile.accuracy_coco))
            if profile.pricing_mode == PER_IMAGE_API:
                models.append(CurveModel(name=name, accuracy=accuracy, profile=profile))
            else:
                params = (
                    catalog.scale(entry["scale"]) if "scale" in entry else _params(entry)
                )
                models.append(CurveModel(name=name, accuracy=accuracy, params=params))
        rows = curve(models, volumes)
        return _ok(
            [{"volume": r.volume, "model": r.model, "tco_usd": r.tco, "ccd_usd": r.ccd} for r in rows]
        )

    @app.post("/v1/decide")
    async def post_decide(request: Request):
        body = await _body(request)
        if "preset" in body:
            matches = [s for s in scenario_presets if s.name == body["preset"]]
            if not matches:
                raise ValidationError(f"unknown preset {body['preset']!r}", field="preset")
            scenario = matches[0]
        else:
            scenario = DeploymentScenario.from_dict(_require(body, "scenario", dict))
        report = evaluate_scenario(scenario, catalog)
        return _ok(
            {
                "scenario": scenario.to_dict(),
                "recommendation": recommend(scenario, catalog).to_dict(),
                "lifetime_volume": report.lifetime_volume,
                "costs": report.costs,
                "ccd_at_lifetime": report.ccd_at_lifetime,
            }
        )

    return app
