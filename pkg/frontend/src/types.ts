/**
 * Wire types of the /v1 service API. The explorer computes no economics
 * itself; everything numeric displayed in the UI is carried by one of
 * these payloads.
 */

export interface ApiEnvelope<T> {
  ok: boolean;
  data?: T;
  error?: { code: string; message: string; field: string | null };
}

export interface CatalogProfile {
  pricing_mode: "upfront_amortized" | "per_image_api";
  api_price_per_image: number;
  free_tier_daily_quota: number;
  accuracy_coco: number;
  accuracy_novel_by_tier: Record<string, number>;
  latency_ms: number;
}

export interface Catalog {
  version: string;
  profiles: Record<string, CatalogProfile>;
  system_scales: Record<string, Record<string, number>>;
}

export interface Scenario {
  name: string;
  daily_volume: number;
  n_categories: number;
  budget_upfront: number | null;
  accuracy_floor: number;
  latency_budget_ms: number | null;
  category_additions_per_month: number;
  deployment_lifetime_days: number;
  novel_category_share: number;
  annotation_price_per_box: number;
}

export interface BreakEven {
  volume: number;
  daily_for_one_year: number;
  cost_margin: number;
}

export interface CurveRow {
  volume: number;
  model: string;
  tco_usd: number;
  ccd_usd: number;
}

export interface RuleFiring {
  rule: string;
  effect: string;
  detail: string;
}

export interface Recommendation {
  choice: "supervised" | "api" | "hybrid" | "none";
  chosen_profile: string | null;
  rationale: RuleFiring[];
  breakeven: BreakEven | null;
  projected_costs: Record<string, number>;
  ruleset: string;
  catalog_version: string;
}

export interface DecideResponse {
  scenario: Scenario;
  recommendation: Recommendation;
  lifetime_volume: number;
  costs: Record<string, number>;
  ccd_at_lifetime: Record<string, number | null>;
}
