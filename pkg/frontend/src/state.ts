/**
 * Explorer state: the adjustable deployment parameters, serializable to a
 * URL query string for shareable links. Slider bounds mirror the valid
 * ranges of the server-side scenario type; values are clamped on parse so
 * a hand-edited URL can never produce an out-of-range request.
 */

import type { Scenario } from "./types";

export interface ExplorerState {
  preset: string | null; // scenario preset name, or null for free-form
  scale: string; // catalog system-scale used for the supervised cost column
  dailyVolume: number;
  nCategories: number;
  budgetUpfront: number | null; // null = unlimited
  accuracyFloor: number;
  latencyBudgetMs: number | null; // null = any
  lifetimeDays: number;
  novelShare: number;
  pricePerBox: number;
  applyFreeTier: boolean;
}

export const DEFAULT_STATE: ExplorerState = {
  preset: null,
  scale: "large",
  dailyVolume: 10_000,
  nCategories: 100,
  budgetUpfront: null,
  accuracyFloor: 0.5,
  latencyBudgetMs: null,
  lifetimeDays: 365,
  novelShare: 0,
  pricePerBox: 0.3,
  applyFreeTier: false,
};

export type NumericStateKey =
  | "dailyVolume"
  | "nCategories"
  | "accuracyFloor"
  | "lifetimeDays"
  | "novelShare"
  | "pricePerBox";

export interface SliderSpec {
  key: NumericStateKey;
  label: string;
  min: number;
  max: number;
  step: number;
  log?: boolean;
}

export const SLIDERS: SliderSpec[] = [
  { key: "dailyVolume", label: "Daily volume (images/day)", min: 1, max: 10_000_000, step: 1, log: true },
  { key: "nCategories", label: "Categories", min: 1, max: 500, step: 1 },
  { key: "accuracyFloor", label: "Accuracy floor", min: 0.05, max: 1.0, step: 0.01 },
  { key: "lifetimeDays", label: "Deployment lifetime (days)", min: 1, max: 3650, step: 1 },
  { key: "novelShare", label: "Novel-category share", min: 0, max: 1, step: 0.01 },
  { key: "pricePerBox", label: "Annotation price per box (USD)", min: 0.05, max: 2.0, step: 0.05 },
];

const clamp = (value: number, min: number, max: number) =>
  Math.min(max, Math.max(min, value));

export function toScenario(state: ExplorerState): Scenario {
  return {
    name: state.preset ?? "explorer",
    daily_volume: Math.round(state.dailyVolume),
    n_categories: Math.round(state.nCategories),
    budget_upfront: state.budgetUpfront,
    accuracy_floor: state.accuracyFloor,
    latency_budget_ms: state.latencyBudgetMs,
    category_additions_per_month: 0,
    deployment_lifetime_days: Math.round(state.lifetimeDays),
    novel_category_share: state.novelShare,
    annotation_price_per_box: state.pricePerBox,
  };
}

export function fromScenario(scenario: Scenario, scale: string): ExplorerState {
  return {
    preset: scenario.name,
    scale,
    dailyVolume: scenario.daily_volume,
    nCategories: scenario.n_categories,
    budgetUpfront: scenario.budget_upfront,
    accuracyFloor: scenario.accuracy_floor,
    latencyBudgetMs: scenario.latency_budget_ms,
    lifetimeDays: scenario.deployment_lifetime_days,
    novelShare: scenario.novel_category_share,
    pricePerBox: scenario.annotation_price_per_box,
    applyFreeTier: false,
  };
}

/** Serialize to a query string; defaults are omitted to keep links short. */
export function serializeState(state: ExplorerState): string {
  const params = new URLSearchParams();
  const set = (key: string, value: unknown, fallback: unknown) => {
    if (value !== fallback && value !== null) params.set(key, String(value));
  };
  set("preset", state.preset, null);
  set("scale", state.scale, DEFAULT_STATE.scale);
  set("daily", state.dailyVolume, DEFAULT_STATE.dailyVolume);
  set("cat", state.nCategories, DEFAULT_STATE.nCategories);
  if (state.budgetUpfront !== null) params.set("budget", String(state.budgetUpfront));
  set("floor", state.accuracyFloor, DEFAULT_STATE.accuracyFloor);
  if (state.latencyBudgetMs !== null) params.set("lat", String(state.latencyBudgetMs));
  set("days", state.lifetimeDays, DEFAULT_STATE.lifetimeDays);
  set("novel", state.novelShare, DEFAULT_STATE.novelShare);
  set("box", state.pricePerBox, DEFAULT_STATE.pricePerBox);
  if (state.applyFreeTier) params.set("freetier", "1");
  return params.toString();
}

export function parseState(query: string): ExplorerState {
  const params = new URLSearchParams(query);
  const num = (key: string, fallback: number, min: number, max: number) => {
    const raw = params.get(key);
    if (raw === null) return fallback;
    const value = Number(raw);
    return Number.isFinite(value) ? clamp(value, min, max) : fallback;
  };
  const optional = (key: string, min: number, max: number): number | null => {
    const raw = params.get(key);
    if (raw === null) return null;
    const value = Number(raw);
    return Number.isFinite(value) ? clamp(value, min, max) : null;
  };
  return {
    preset: params.get("preset"),
    scale: params.get("scale") ?? DEFAULT_STATE.scale,
    dailyVolume: num("daily", DEFAULT_STATE.dailyVolume, 0, 100_000_000),
    nCategories: num("cat", DEFAULT_STATE.nCategories, 1, 10_000),
    budgetUpfront: optional("budget", 0, 1e9),
    accuracyFloor: num("floor", DEFAULT_STATE.accuracyFloor, 0.01, 1),
    latencyBudgetMs: optional("lat", 1, 1e6),
    lifetimeDays: num("days", DEFAULT_STATE.lifetimeDays, 1, 36_500),
    novelShare: num("novel", DEFAULT_STATE.novelShare, 0, 1),
    pricePerBox: num("box", DEFAULT_STATE.pricePerBox, 0.01, 100),
    applyFreeTier: params.get("freetier") === "1",
  };
}
