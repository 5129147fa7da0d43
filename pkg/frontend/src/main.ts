/**
 * Explorer bootstrap: wires sliders and preset selection to debounced
 * service round-trips, keeps the URL in sync with the state for shareable
 * links, and re-renders on every response. Scenario presets come from
 * /v1/scenarios; nothing economic is duplicated client-side.
 */

import { ApiClient, ServiceError, StaleRequestError, debounce } from "./api";
import {
  DEFAULT_STATE,
  SLIDERS,
  fromScenario,
  parseState,
  serializeState,
  toScenario,
  type ExplorerState,
} from "./state";
import type { CurveRow, DecideResponse, Scenario } from "./types";
import { buildDashboard, mountDashboard } from "./view";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ?? "http://127.0.0.1:8787";
const CURVE_VOLUMES = [
  1_000, 3_000, 10_000, 30_000, 100_000, 300_000, 1_000_000, 3_000_000, 10_000_000,
  30_000_000, 100_000_000, 200_000_000,
];
const DEBOUNCE_MS = 150;

const api = new ApiClient(SERVICE_URL);
let state: ExplorerState = parseState(window.location.search);
let presets: Scenario[] = [];

const controls = document.getElementById("controls") as HTMLElement;
const dashboard = document.getElementById("dashboard") as HTMLElement;
const banner = document.getElementById("banner") as HTMLElement;

function showBanner(message: string, retry?: () => void): void {
  banner.innerHTML = "";
  banner.textContent = message;
  if (retry) {
    const button = document.createElement("button");
    button.textContent = "retry";
    button.addEventListener("click", retry);
    banner.appendChild(button);
  }
  banner.hidden = false;
}

function hideBanner(): void {
  banner.hidden = true;
}

function syncUrl(): void {
  const query = serializeState(state);
  const url = query ? `?${query}` : window.location.pathname;
  window.history.replaceState({}, "", url);
}

async function refresh(): Promise<void> {
  syncUrl();
  try {
    const [curveRows, decide]: [CurveRow[], DecideResponse] = await Promise.all([
      api.tcoCurve(state.scale, ["gemini-flash-2.5", "gpt-4v"], CURVE_VOLUMES),
      api.decide(toScenario(state)),
    ]);
    hideBanner();
    mountDashboard(dashboard, buildDashboard(curveRows, decide, serializeState(state)));
  } catch (error) {
    if (error instanceof StaleRequestError) return;
    if (error instanceof DOMException && error.name === "AbortError") return;
    if (error instanceof ServiceError && error.field) {
      showBanner(`invalid ${error.field}: ${error.message}`);
      markInvalid(error.field);
      return; // previous charts stay in place
    }
    showBanner(`service unreachable at ${SERVICE_URL}`, () => void refresh());
  }
}

const debouncedRefresh = debounce(() => void refresh(), DEBOUNCE_MS);

function markInvalid(field: string): void {
  for (const input of controls.querySelectorAll("input")) {
    input.classList.toggle("invalid", input.dataset["field"] === field);
  }
}

function sliderRow(spec: (typeof SLIDERS)[number]): HTMLElement {
  const row = document.createElement("label");
  row.className = "control";
  const title = document.createElement("span");
  const input = document.createElement("input");
  input.type = "range";
  input.dataset["field"] = String(spec.key);
  const current = Number(state[spec.key] ?? spec.min);
  if (spec.log) {
    input.min = String(Math.log10(spec.min));
    input.max = String(Math.log10(spec.max));
    input.step = "0.01";
    input.value = String(Math.log10(Math.max(current, spec.min)));
  } else {
    input.min = String(spec.min);
    input.max = String(spec.max);
    input.step = String(spec.step);
    input.value = String(current);
  }
  const render = (value: number) => {
    title.textContent = `${spec.label}: ${Number.isInteger(spec.step) ? Math.round(value).toLocaleString("en-US") : value.toFixed(2)}`;
  };
  render(current);
  input.addEventListener("input", () => {
    const raw = Number(input.value);
    const value = spec.log ? Math.round(10 ** raw) : raw;
    state[spec.key] = value;
    state.preset = null;
    render(value);
    debouncedRefresh();
  });
  row.append(title, input);
  return row;
}

function presetPicker(): HTMLElement {
  const wrap = document.createElement("label");
  wrap.className = "control";
  const title = document.createElement("span");
  title.textContent = "Scenario preset";
  const select = document.createElement("select");
  select.append(new Option("custom", ""));
  for (const preset of presets) {
    select.append(new Option(preset.name, preset.name));
  }
  select.value = state.preset ?? "";
  select.addEventListener("change", () => {
    if (select.value) {
      const preset = presets.find((p) => p.name === select.value);
      if (preset) state = fromScenario(preset, state.scale);
    } else {
      state = { ...DEFAULT_STATE };
    }
    renderControls();
    void refresh();
  });
  wrap.append(title, select);
  return wrap;
}

function renderControls(): void {
  controls.innerHTML = "";
  controls.append(presetPicker());
  for (const spec of SLIDERS) controls.append(sliderRow(spec));
}

async function boot(): Promise<void> {
  try {
    presets = await api.scenarios();
    hideBanner();
  } catch {
    showBanner(`service unreachable at ${SERVICE_URL}`, () => void boot());
    return;
  }
  renderControls();
  await refresh();
}

void boot();
