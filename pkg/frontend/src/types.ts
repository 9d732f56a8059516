/** Document shapes served by the project API under /api/v1. */

export interface Point {
  x: number;
  y: number;
}

export type NodeKind = "intersection" | "entrance" | "poi" | "auxiliary";

export interface NodeDoc {
  id: string;
  x: number;
  y: number;
  kind?: NodeKind;
  label?: string;
}

export interface EdgeDoc {
  a: string;
  b: string;
  /** Walking length; straight-line distance when omitted. */
  length?: number;
}

export interface ScenarioDoc {
  source: string;
  destination: string;
  importance?: number;
}

export interface LayoutDoc {
  nodes: NodeDoc[];
  edges: EdgeDoc[];
  scenarios?: ScenarioDoc[];
}

export interface SchemeCostDoc {
  local_length: number;
  local_node: number;
  local_angle: number;
  global_length: number;
  global_node: number;
  total: number;
}

export interface SchemeScenarioDoc {
  source: string;
  destination: string;
  importance: number;
  path: string[];
  length: number;
}

export interface SchemeDoc {
  scenarios: SchemeScenarioDoc[];
  cost: SchemeCostDoc;
}

export interface SignEntryDoc {
  node: string;
  destination: string;
  next_node: string;
}

export interface BoardSignDoc {
  destination: string;
  /** Arrow direction, degrees counterclockwise from +x in world coordinates. */
  bearing_deg: number;
}

export interface BoardDoc {
  node: string;
  signs: BoardSignDoc[];
}

export interface SignCostDoc {
  count: number;
  distribution: number;
  /** null when the failure rate blew past the tolerance (infinite cost). */
  failure: number | null;
  total: number | null;
}

export interface PlacementDoc {
  entries: SignEntryDoc[];
  boards: BoardDoc[];
  failure_rate?: number;
  cost?: SignCostDoc;
}

export interface FieldSampleDoc {
  node: string;
  x: number;
  y: number;
  /** Success rate toward the field's destination, 0..1. */
  rate: number;
}

export interface FieldDoc {
  destination: string;
  interval: number;
  samples: FieldSampleDoc[];
}

export interface SchemeWeightsDoc {
  local_length: number;
  local_node: number;
  local_angle: number;
  global_length: number;
  global_node: number;
}

export interface SignWeightsDoc {
  count: number;
  distribution: number;
  failure: number;
  /** Failure-rate cap; placements above it cost infinity. */
  tolerance: number;
}

export interface AgentParamsDoc {
  visibility: number;
  miss_prob: number;
  stretch_factor: number;
  agents_per_scenario: number;
}

export interface AnnealDoc {
  t_initial: number;
  cooling: number;
  t_min: number;
  max_iters: number;
  stop_window: number;
  stop_rel_change: number;
}

export interface ConfigDoc {
  seed: number;
  sign_spacing: number;
  stretch: number;
  k_cap: number;
  heatmap_interval: number;
  scheme_weights: SchemeWeightsDoc;
  sign_weights: SignWeightsDoc;
  agent: AgentParamsDoc;
  scheme_anneal: AnnealDoc;
  sign_anneal: AnnealDoc;
}

export type JobKind = "optimize" | "refine" | "heatmap";
export type JobStatus = "queued" | "running" | "done" | "error";

export interface JobDoc {
  id: string;
  kind: JobKind;
  status: JobStatus;
  progress: Record<string, number> | null;
  result: unknown;
  error: string | null;
}

/** Response of a blind-zone fix: new entries plus the refreshed documents. */
export interface FixResultDoc {
  added: SignEntryDoc[];
  placement: PlacementDoc;
  field: FieldDoc;
}

export interface ErrorDoc {
  error: {
    code: string;
    message: string;
  };
}
