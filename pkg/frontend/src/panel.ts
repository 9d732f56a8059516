/** Parameter panel model: the documented defaults, a declarative field
 * list the DOM form is generated from, and client-side validation that
 * mirrors the server's config invariants so bad values never leave the
 * browser. */

import type { ConfigDoc } from "./types.js";

export const DEFAULT_CONFIG: ConfigDoc = {
  seed: 0,
  sign_spacing: 50.0,
  stretch: 0.16,
  k_cap: 50,
  heatmap_interval: 25.0,
  scheme_weights: {
    local_length: 1.0,
    local_node: 1.0,
    local_angle: 10.0,
    global_length: 5.0,
    global_node: 5.0,
  },
  sign_weights: {
    count: 1.0,
    distribution: 1.0,
    failure: 10.0,
    tolerance: 0.2,
  },
  agent: {
    visibility: 125.0,
    miss_prob: 0.0,
    stretch_factor: 1.5,
    agents_per_scenario: 100,
  },
  scheme_anneal: {
    t_initial: 1.0,
    cooling: 0.999,
    t_min: 1e-4,
    max_iters: 100000,
    stop_window: 1000,
    stop_rel_change: 0.01,
  },
  sign_anneal: {
    t_initial: 0.1,
    cooling: 0.99,
    t_min: 1e-5,
    max_iters: 5000,
    stop_window: 50,
    stop_rel_change: 0.01,
  },
};

export interface PanelField {
  /** Dotted path into the config document, e.g. "agent.miss_prob". */
  path: string;
  label: string;
  integer?: boolean;
  group: string;
}

export const PANEL_FIELDS: PanelField[] = [
  { path: "seed", label: "seed", integer: true, group: "run" },
  { path: "stretch", label: "detour stretch", group: "run" },
  { path: "k_cap", label: "candidate cap", integer: true, group: "run" },
  { path: "sign_spacing", label: "sign spacing (m)", group: "run" },
  { path: "heatmap_interval", label: "heatmap interval (m)", group: "run" },
  { path: "scheme_weights.local_length", label: "local length", group: "route weights" },
  { path: "scheme_weights.local_node", label: "local nodes", group: "route weights" },
  { path: "scheme_weights.local_angle", label: "local turns", group: "route weights" },
  { path: "scheme_weights.global_length", label: "global length", group: "route weights" },
  { path: "scheme_weights.global_node", label: "global nodes", group: "route weights" },
  { path: "sign_weights.count", label: "sign count", group: "sign weights" },
  { path: "sign_weights.distribution", label: "spread evenness", group: "sign weights" },
  { path: "sign_weights.failure", label: "failure rate", group: "sign weights" },
  { path: "sign_weights.tolerance", label: "failure tolerance", group: "sign weights" },
  { path: "agent.visibility", label: "visibility (m)", group: "agents" },
  { path: "agent.miss_prob", label: "miss chance", group: "agents" },
  { path: "agent.stretch_factor", label: "distance budget factor", group: "agents" },
  { path: "agent.agents_per_scenario", label: "agents per scenario", integer: true, group: "agents" },
];

export interface FieldError {
  path: string;
  message: string;
}

export function getPath(doc: ConfigDoc, path: string): number {
  let value: unknown = doc;
  for (const part of path.split(".")) {
    value = (value as Record<string, unknown>)[part];
  }
  return value as number;
}

export function setPath(doc: ConfigDoc, path: string, value: number): ConfigDoc {
  const copy = cloneConfig(doc);
  const parts = path.split(".");
  let cursor: Record<string, unknown> = copy as unknown as Record<string, unknown>;
  for (const part of parts.slice(0, -1)) {
    cursor = cursor[part] as Record<string, unknown>;
  }
  cursor[parts[parts.length - 1]] = value;
  return copy;
}

export function cloneConfig(doc: ConfigDoc): ConfigDoc {
  return structuredClone(doc);
}

/** Parse one form value; null signals an unparseable entry. */
export function parseFieldValue(raw: string, integer = false): number | null {
  const trimmed = raw.trim();
  if (trimmed === "") {
    return null;
  }
  const value = Number(trimmed);
  if (!Number.isFinite(value)) {
    return null;
  }
  if (integer && !Number.isInteger(value)) {
    return null;
  }
  return value;
}

function check(
  errors: FieldError[],
  ok: boolean,
  path: string,
  message: string,
): void {
  if (!ok) {
    errors.push({ path, message });
  }
}

function checkAnneal(errors: FieldError[], prefix: string, doc: ConfigDoc): void {
  const anneal = prefix === "scheme_anneal" ? doc.scheme_anneal : doc.sign_anneal;
  check(errors, anneal.t_initial > 0, `${prefix}.t_initial`, "must be positive");
  check(errors, anneal.t_min > 0, `${prefix}.t_min`, "must be positive");
  check(
    errors,
    anneal.cooling > 0 && anneal.cooling < 1,
    `${prefix}.cooling`,
    "must lie strictly between 0 and 1",
  );
  check(
    errors,
    Number.isInteger(anneal.max_iters) && anneal.max_iters >= 1,
    `${prefix}.max_iters`,
    "must be an integer >= 1",
  );
  check(
    errors,
    Number.isInteger(anneal.stop_window) && anneal.stop_window >= 1,
    `${prefix}.stop_window`,
    "must be an integer >= 1",
  );
  check(errors, anneal.stop_rel_change >= 0, `${prefix}.stop_rel_change`, "must be >= 0");
}

/** All violations at once so the form can annotate every bad field. */
export function validateConfig(doc: ConfigDoc): FieldError[] {
  const errors: FieldError[] = [];
  check(errors, Number.isInteger(doc.seed), "seed", "must be an integer");
  check(errors, doc.sign_spacing > 0, "sign_spacing", "must be positive");
  check(errors, doc.stretch >= 0, "stretch", "must be >= 0");
  check(errors, Number.isInteger(doc.k_cap) && doc.k_cap >= 1, "k_cap", "must be an integer >= 1");
  check(errors, doc.heatmap_interval > 0, "heatmap_interval", "must be positive");
  for (const [name, value] of Object.entries(doc.scheme_weights)) {
    check(errors, value >= 0, `scheme_weights.${name}`, "must be >= 0");
  }
  for (const name of ["count", "distribution", "failure"] as const) {
    check(errors, doc.sign_weights[name] >= 0, `sign_weights.${name}`, "must be >= 0");
  }
  check(
    errors,
    doc.sign_weights.tolerance >= 0 && doc.sign_weights.tolerance <= 1,
    "sign_weights.tolerance",
    "must lie in [0, 1]",
  );
  check(errors, doc.agent.visibility >= 0, "agent.visibility", "must be >= 0");
  check(
    errors,
    doc.agent.miss_prob >= 0 && doc.agent.miss_prob <= 1,
    "agent.miss_prob",
    "must lie in [0, 1]",
  );
  check(errors, doc.agent.stretch_factor >= 1, "agent.stretch_factor", "must be >= 1");
  check(
    errors,
    Number.isInteger(doc.agent.agents_per_scenario) && doc.agent.agents_per_scenario >= 1,
    "agent.agents_per_scenario",
    "must be an integer >= 1",
  );
  checkAnneal(errors, "scheme_anneal", doc);
  checkAnneal(errors, "sign_anneal", doc);
  return errors;
}
