/**
 * Dashboard view-model: a pure function from (state, service responses) to
 * displayable data. Every number in the model is lifted verbatim from a
 * service payload (formatting only) — the client performs no economics.
 * Tests intercept the fetch layer and verify exactly that.
 */

import { formatUsd, formatVolume, renderChart, type ChartSvg } from "./charts";
import type { CurveRow, DecideResponse } from "./types";

export interface CostLine {
  label: string;
  value: number; // verbatim service number
  text: string; // formatted for display
  chosen: boolean;
}

export interface RecommendationCard {
  choiceLabel: string;
  viable: boolean;
  rationale: { rule: string; text: string }[];
  costs: CostLine[];
  breakevenText: string;
  rulesetLabel: string;
}

export interface DashboardModel {
  tcoChart: ChartSvg;
  ccdChart: ChartSvg;
  card: RecommendationCard;
  breakevenVolume: number | null;
  shareQuery: string;
}

export function choiceLabel(decide: DecideResponse): string {
  const rec = decide.recommendation;
  switch (rec.choice) {
    case "supervised":
      return "supervised";
    case "hybrid":
      return `hybrid (${rec.chosen_profile ?? "api"} screening + supervised verify)`;
    case "api":
      return rec.chosen_profile ?? "api";
    default:
      return "no viable architecture";
  }
}

export function buildCard(decide: DecideResponse): RecommendationCard {
  const rec = decide.recommendation;
  const chosenKey =
    rec.choice === "api" ? rec.chosen_profile : rec.choice === "none" ? null : rec.choice;
  const costs: CostLine[] = Object.entries(rec.projected_costs).map(([label, value]) => ({
    label,
    value,
    text: formatUsd(value),
    chosen: label === chosenKey,
  }));
  return {
    choiceLabel: choiceLabel(decide),
    viable: rec.choice !== "none",
    // fired rules verbatim from the decision rationale
    rationale: rec.rationale.map((r) => ({ rule: r.rule, text: `${r.effect}: ${r.detail}` })),
    costs,
    breakevenText:
      rec.breakeven === null
        ? "no finite break-even (API margin not positive)"
        : `break-even at ${formatVolume(rec.breakeven.volume)} images ` +
          `(${Math.round(rec.breakeven.daily_for_one_year).toLocaleString("en-US")}/day for one year)`,
    rulesetLabel: `${rec.ruleset} · catalog ${rec.catalog_version}`,
  };
}

export function buildDashboard(
  curveRows: CurveRow[],
  decide: DecideResponse,
  shareQuery: string,
): DashboardModel {
  const breakeven = decide.recommendation.breakeven;
  return {
    tcoChart: renderChart(curveRows, (r) => r.tco_usd, breakeven, "Total cost vs volume"),
    ccdChart: renderChart(curveRows, (r) => r.ccd_usd, breakeven, "Cost per correct detection vs volume"),
    card: buildCard(decide),
    breakevenVolume: breakeven?.volume ?? null,
    shareQuery,
  };
}

/** Minimal DOM mounting; all content comes from the view-model. */
export function mountDashboard(root: HTMLElement, model: DashboardModel): void {
  const legend = (chart: ChartSvg) =>
    chart.legend
      .map((l) => `<span class="legend"><i style="background:${l.color}"></i>${l.model}</span>`)
      .join(" ");
  const card = model.card;
  const costRows = card.costs
    .map(
      (c) =>
        `<tr class="${c.chosen ? "chosen" : ""}"><td>${c.label}</td>` +
        `<td data-value="${c.value}">${c.text}</td></tr>`,
    )
    .join("");
  const rationale = card.rationale
    .map((r) => `<li><code>${r.rule}</code> ${r.text}</li>`)
    .join("");
  root.innerHTML = `
    <section class="panel">
      <h2>Total cost of ownership</h2>
      ${model.tcoChart.svg}
      <div>${legend(model.tcoChart)}</div>
    </section>
    <section class="panel">
      <h2>Cost per correct detection</h2>
      ${model.ccdChart.svg}
      <div>${legend(model.ccdChart)}</div>
    </section>
    <section class="panel" id="recommendation-card" data-choice="${card.choiceLabel}">
      <h2>Recommendation</h2>
      <p class="choice ${card.viable ? "" : "not-viable"}">${card.choiceLabel}</p>
      <p class="breakeven">${card.breakevenText}</p>
      <table><tbody>${costRows}</tbody></table>
      <ul class="rationale">${rationale}</ul>
      <p class="meta">${card.rulesetLabel}</p>
    </section>`;
}
