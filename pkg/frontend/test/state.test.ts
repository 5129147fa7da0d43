import { describe, expect, it } from "vitest";

import {
  DEFAULT_STATE,
  fromScenario,
  parseState,
  serializeState,
  toScenario,
  type ExplorerState,
} from "../src/state";
import type { Scenario } from "../src/types";

describe("URL state round-trip", () => {
  it("serialize -> parse is the identity", () => {
    const state: ExplorerState = {
      preset: "medical-imaging",
      scale: "medical",
      dailyVolume: 10_000,
      nCategories: 12,
      budgetUpfront: 50_000,
      accuracyFloor: 0.85,
      latencyBudgetMs: 10_000,
      lifetimeDays: 365,
      novelShare: 0,
      pricePerBox: 1.0,
      applyFreeTier: true,
    };
    expect(parseState(serializeState(state))).toEqual(state);
  });

  it("defaults serialize to an empty query", () => {
    expect(serializeState(DEFAULT_STATE)).toBe("");
    expect(parseState("")).toEqual(DEFAULT_STATE);
  });

  it("null budget/latency mean unlimited and survive the round-trip", () => {
    const state = { ...DEFAULT_STATE, budgetUpfront: null, latencyBudgetMs: null };
    const parsed = parseState(serializeState(state));
    expect(parsed.budgetUpfront).toBeNull();
    expect(parsed.latencyBudgetMs).toBeNull();
  });

  it("clamps hand-edited out-of-range values", () => {
    const parsed = parseState("daily=999999999999&floor=7&novel=-3");
    expect(parsed.dailyVolume).toBe(100_000_000);
    expect(parsed.accuracyFloor).toBe(1);
    expect(parsed.novelShare).toBe(0);
  });

  it("ignores junk values", () => {
    const parsed = parseState("daily=banana&box=");
    expect(parsed.dailyVolume).toBe(DEFAULT_STATE.dailyVolume);
  });
});

describe("scenario conversion", () => {
  it("state -> scenario carries every slider", () => {
    const scenario = toScenario({ ...DEFAULT_STATE, dailyVolume: 152_000, accuracyFloor: 0.5 });
    expect(scenario.daily_volume).toBe(152_000);
    expect(scenario.accuracy_floor).toBe(0.5);
    expect(scenario.budget_upfront).toBeNull();
  });

  it("preset scenario -> state -> scenario is stable", () => {
    const preset: Scenario = {
      name: "startup-ecommerce",
      daily_volume: 1000,
      n_categories: 50,
      budget_upfront: 5000,
      accuracy_floor: 0.65,
      latency_budget_ms: null,
      category_additions_per_month: 7.5,
      deployment_lifetime_days: 365,
      novel_category_share: 0,
      annotation_price_per_box: 0.3,
    };
    const state = fromScenario(preset, "large");
    const back = toScenario(state);
    expect(back.daily_volume).toBe(preset.daily_volume);
    expect(back.n_categories).toBe(preset.n_categories);
    expect(back.budget_upfront).toBe(preset.budget_upfront);
    expect(back.accuracy_floor).toBe(preset.accuracy_floor);
  });
});
