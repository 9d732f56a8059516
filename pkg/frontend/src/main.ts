/** Browser entry point: wires the canvas, toolbar, parameter panel, and
 * toast area to the controller. Everything rendered here derives from the
 * API documents, so reloading the page rebuilds the same view. */

import { StudioApi } from "./api.js";
import { StudioController } from "./controller.js";
import { sampleChains, type SampleChains } from "./geometry.js";
import {
  DEFAULT_CONFIG,
  PANEL_FIELDS,
  cloneConfig,
  getPath,
  parseFieldValue,
  setPath,
  type FieldError,
} from "./panel.js";
import { renderScene } from "./render.js";
import {
  boundsOf,
  fitBounds,
  panBy,
  screenToWorld,
  zoomAt,
  type ViewTransform,
} from "./transform.js";
import type { BoardDoc, ConfigDoc, Point } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

function showToast(kind: "info" | "error", message: string): void {
  const div = document.createElement("div");
  div.className = `toast ${kind}`;
  div.textContent = message;
  el("toasts").appendChild(div);
  setTimeout(() => div.remove(), 4200);
}

const canvas = el<HTMLCanvasElement>("map");
const context = canvas.getContext("2d");
if (!context) {
  throw new Error("canvas 2d context unavailable");
}
const ctx = context;

const controller = new StudioController(new StudioApi(""), {
  onChange: () => {
    syncControls();
    scheduleRender();
  },
  toast: showToast,
});

let transform: ViewTransform = { scale: 1, tx: 0, ty: 0 };
let fitted = false;
let hover: BoardDoc | null = null;

// Sample chains only depend on the layout and the two spacings; rebuild
// when either spacing changes.
let chainsKey = "";
let chains: SampleChains | null = null;
function currentChains(): SampleChains | null {
  const data = controller.data;
  if (!data) {
    return null;
  }
  const field = controller.currentField();
  const interval = field ? field.interval : data.config.heatmap_interval;
  const key = `${data.config.sign_spacing}:${interval}`;
  if (key !== chainsKey) {
    chains = sampleChains(data.layout, data.config.sign_spacing, interval);
    chainsKey = key;
  }
  return chains;
}

let renderQueued = false;
function scheduleRender(): void {
  if (renderQueued) {
    return;
  }
  renderQueued = true;
  requestAnimationFrame(() => {
    renderQueued = false;
    render();
  });
}

function render(): void {
  const data = controller.data;
  if (!data) {
    return;
  }
  const wrap = el<HTMLDivElement>("map-wrap");
  const rect = wrap.getBoundingClientRect();
  const width = Math.max(120, Math.floor(rect.width));
  const height = Math.max(120, Math.floor(rect.height));
  const dpr = window.devicePixelRatio || 1;
  if (canvas.width !== width * dpr || canvas.height !== height * dpr) {
    canvas.width = width * dpr;
    canvas.height = height * dpr;
    canvas.style.width = `${width}px`;
    canvas.style.height = `${height}px`;
  }
  ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
  if (!fitted) {
    const bounds = boundsOf(data.layout.nodes);
    if (bounds) {
      transform = fitBounds(bounds, width, height, 70);
    }
    fitted = true;
  }
  renderScene(ctx, {
    width,
    height,
    transform,
    layout: data.layout,
    positions: controller.signPositions,
    chains: currentChains(),
    overlays: controller.state.overlays,
    stale: controller.state.stale,
    scheme: data.scheme,
    placement: data.placement,
    field: controller.currentField(),
    hoverBoard: hover,
  });
  updateSummary();
}

// ---- map interactions ----

let dragging = false;
let dragMoved = false;
let lastPointer: Point = { x: 0, y: 0 };

canvas.addEventListener("pointerdown", (e) => {
  dragging = true;
  dragMoved = false;
  lastPointer = { x: e.offsetX, y: e.offsetY };
  canvas.setPointerCapture(e.pointerId);
});

canvas.addEventListener("pointermove", (e) => {
  const p = { x: e.offsetX, y: e.offsetY };
  if (dragging) {
    const dx = p.x - lastPointer.x;
    const dy = p.y - lastPointer.y;
    if (Math.abs(dx) + Math.abs(dy) > 2) {
      dragMoved = true;
    }
    transform = panBy(transform, dx, dy);
    lastPointer = p;
    scheduleRender();
    return;
  }
  const board = controller.boardAt(screenToWorld(transform, p), 16 / transform.scale);
  if (board !== hover) {
    hover = board;
    scheduleRender();
  }
});

canvas.addEventListener("pointerup", (e) => {
  dragging = false;
  if (dragMoved) {
    return;
  }
  const world = screenToWorld(transform, { x: e.offsetX, y: e.offsetY });
  void controller.clickAt(world);
});

canvas.addEventListener(
  "wheel",
  (e) => {
    e.preventDefault();
    const factor = Math.exp(-e.deltaY * 0.0015);
    transform = zoomAt(transform, { x: e.offsetX, y: e.offsetY }, factor);
    scheduleRender();
  },
  { passive: false },
);

window.addEventListener("resize", scheduleRender);

// ---- toolbar ----

const destinationSelect = el<HTMLSelectElement>("destination");
destinationSelect.addEventListener("change", () => {
  controller.selectDestination(destinationSelect.value);
});

for (const name of ["paths", "signs", "heatmap"] as const) {
  el<HTMLInputElement>(`overlay-${name}`).addEventListener("change", () => {
    controller.toggle(name);
  });
}

el<HTMLButtonElement>("run-optimize").addEventListener("click", () => {
  void controller.runOptimize();
});
el<HTMLButtonElement>("run-refine").addEventListener("click", () => {
  void controller.runRefine();
});
el<HTMLButtonElement>("run-heatmap").addEventListener("click", () => {
  void controller.runHeatmap();
});

function syncControls(): void {
  const data = controller.data;
  if (!data) {
    return;
  }
  if (destinationSelect.options.length !== data.destinations.length) {
    destinationSelect.innerHTML = "";
    for (const destination of data.destinations) {
      const option = document.createElement("option");
      option.value = destination;
      option.textContent = destination;
      destinationSelect.appendChild(option);
    }
  }
  if (controller.state.destination !== null) {
    destinationSelect.value = controller.state.destination;
  }
  for (const name of ["paths", "signs", "heatmap"] as const) {
    el<HTMLInputElement>(`overlay-${name}`).checked = controller.state.overlays[name];
  }
  const busy = controller.busy;
  for (const id of ["run-optimize", "run-refine", "run-heatmap", "config-apply"]) {
    el<HTMLButtonElement>(id).disabled = busy;
  }
  el("job-status").textContent = controller.progressText ?? (busy ? "working…" : "");
}

// ---- parameter panel ----

function buildForm(): void {
  const form = el<HTMLFormElement>("config-form");
  const groups = new Map<string, HTMLFieldSetElement>();
  for (const field of PANEL_FIELDS) {
    let fieldset = groups.get(field.group);
    if (!fieldset) {
      fieldset = document.createElement("fieldset");
      const legend = document.createElement("legend");
      legend.textContent = field.group;
      fieldset.appendChild(legend);
      groups.set(field.group, fieldset);
      form.appendChild(fieldset);
    }
    const label = document.createElement("label");
    const span = document.createElement("span");
    span.textContent = field.label;
    const input = document.createElement("input");
    input.id = `cfg-${field.path}`;
    input.type = "text";
    input.inputMode = "decimal";
    input.autocomplete = "off";
    label.appendChild(span);
    label.appendChild(input);
    fieldset.appendChild(label);
  }
}

function fillForm(config: ConfigDoc): void {
  for (const field of PANEL_FIELDS) {
    el<HTMLInputElement>(`cfg-${field.path}`).value = String(getPath(config, field.path));
  }
}

function showErrors(errors: FieldError[]): void {
  const list = el<HTMLUListElement>("config-errors");
  list.innerHTML = "";
  const bad = new Set(errors.map((e) => e.path));
  for (const field of PANEL_FIELDS) {
    el<HTMLInputElement>(`cfg-${field.path}`).classList.toggle("invalid", bad.has(field.path));
  }
  for (const error of errors) {
    const item = document.createElement("li");
    item.textContent = error.path ? `${error.path}: ${error.message}` : error.message;
    list.appendChild(item);
  }
}

function readForm(): { config: ConfigDoc | null; errors: FieldError[] } {
  const data = controller.data;
  if (!data) {
    return { config: null, errors: [{ path: "", message: "project not loaded yet" }] };
  }
  let config = cloneConfig(data.config);
  const errors: FieldError[] = [];
  for (const field of PANEL_FIELDS) {
    const raw = el<HTMLInputElement>(`cfg-${field.path}`).value;
    const value = parseFieldValue(raw, field.integer);
    if (value === null) {
      errors.push({
        path: field.path,
        message: field.integer ? "must be an integer" : "must be a number",
      });
      continue;
    }
    config = setPath(config, field.path, value);
  }
  return errors.length > 0 ? { config: null, errors } : { config, errors: [] };
}

el<HTMLButtonElement>("config-apply").addEventListener("click", () => {
  void (async () => {
    const { config, errors } = readForm();
    if (!config) {
      showErrors(errors);
      return;
    }
    const violations = await controller.applyConfig(config);
    showErrors(violations);
    if (violations.length === 0) {
      showToast("info", "configuration saved; runs will use it");
    }
  })();
});

el<HTMLButtonElement>("config-reset").addEventListener("click", () => {
  fillForm(DEFAULT_CONFIG);
  showErrors([]);
  showToast("info", "defaults restored; apply to save them");
});

// ---- summary ----

function updateSummary(): void {
  const data = controller.data;
  if (!data) {
    return;
  }
  const items: [string, string][] = [
    ["nodes", String(data.layout.nodes.length)],
    ["edges", String(data.layout.edges.length)],
    ["scenarios", String((data.layout.scenarios ?? []).length)],
  ];
  if (data.scheme) {
    items.push(["route cost", data.scheme.cost.total.toFixed(4)]);
  }
  if (data.placement) {
    items.push(["sign entries", String(data.placement.entries.length)]);
    if (data.placement.failure_rate !== undefined) {
      items.push(["failure rate", `${(data.placement.failure_rate * 100).toFixed(1)}%`]);
    }
  }
  const field = controller.currentField();
  if (field) {
    const rates = field.samples.map((s) => s.rate);
    const mean = rates.reduce((a, b) => a + b, 0) / Math.max(1, rates.length);
    items.push([`mean success (${field.destination})`, mean.toFixed(3)]);
  }
  const summary = el<HTMLDListElement>("summary");
  summary.innerHTML = "";
  for (const [term, value] of items) {
    const dt = document.createElement("dt");
    dt.textContent = term;
    const dd = document.createElement("dd");
    dd.textContent = value;
    summary.appendChild(dt);
    summary.appendChild(dd);
  }
}

// ---- boot ----

async function boot(): Promise<void> {
  buildForm();
  try {
    await controller.load();
  } catch (err) {
    showToast("error", err instanceof Error ? err.message : String(err));
    return;
  }
  const data = controller.data;
  if (data) {
    fillForm(data.config);
  }
  syncControls();
  scheduleRender();
}

void boot();
