/** View state: overlay toggles, the selected field destination, the pending
 * job, and staleness marks for overlays whose server documents may have
 * moved on. Reducer-style helpers keep the transitions testable. */

import type { JobKind, LayoutDoc } from "./types.js";

export type OverlayName = "paths" | "signs" | "heatmap";

export interface StaleFlags {
  scheme: boolean;
  placement: boolean;
  fields: boolean;
}

export interface ViewState {
  overlays: Record<OverlayName, boolean>;
  destination: string | null;
  pendingJob: { id: string; kind: JobKind } | null;
  stale: StaleFlags;
}

export function initialViewState(destinations: string[]): ViewState {
  return {
    overlays: { paths: true, signs: true, heatmap: true },
    destination: destinations.length > 0 ? destinations[0] : null,
    pendingJob: null,
    stale: { scheme: false, placement: false, fields: false },
  };
}

/** Destinations the studio offers heatmaps for: scenario destinations when
 * the layout declares scenarios, else every point of interest (the pairs
 * the server defaults to). */
export function destinationsOf(layout: LayoutDoc): string[] {
  const fromScenarios = new Set((layout.scenarios ?? []).map((z) => z.destination));
  if (fromScenarios.size > 0) {
    return [...fromScenarios].sort();
  }
  return layout.nodes
    .filter((n) => n.kind === "poi")
    .map((n) => n.id)
    .sort();
}

export function toggleOverlay(state: ViewState, name: OverlayName): ViewState {
  return {
    ...state,
    overlays: { ...state.overlays, [name]: !state.overlays[name] },
  };
}

export function selectDestination(state: ViewState, destination: string | null): ViewState {
  return { ...state, destination };
}

export function jobStarted(state: ViewState, id: string, kind: JobKind): ViewState {
  return { ...state, pendingJob: { id, kind } };
}

/** A finished job leaves the documents it rewrote stale until refetched.
 * Optimizing invalidates everything downstream; refining invalidates the
 * placement and its fields; a heatmap only the fields. */
export function jobSettled(state: ViewState, kind: JobKind): ViewState {
  const stale = { ...state.stale };
  if (kind === "optimize") {
    stale.scheme = true;
    stale.placement = true;
    stale.fields = true;
  } else if (kind === "refine") {
    stale.placement = true;
    stale.fields = true;
  } else {
    stale.fields = true;
  }
  return { ...state, pendingJob: null, stale };
}

export function refreshed(state: ViewState, parts: Partial<StaleFlags>): ViewState {
  const stale = { ...state.stale };
  if (parts.scheme) {
    stale.scheme = false;
  }
  if (parts.placement) {
    stale.placement = false;
  }
  if (parts.fields) {
    stale.fields = false;
  }
  return { ...state, stale };
}
