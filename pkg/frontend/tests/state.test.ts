import { describe, expect, it } from "vitest";

import {
  destinationsOf,
  initialViewState,
  jobSettled,
  jobStarted,
  refreshed,
  selectDestination,
  toggleOverlay,
} from "../src/state.js";
import type { LayoutDoc } from "../src/types.js";

describe("initialViewState", () => {
  it("starts with every overlay on and the first destination selected", () => {
    const state = initialViewState(["hotel", "school"]);
    expect(state.overlays).toEqual({ paths: true, signs: true, heatmap: true });
    expect(state.destination).toBe("hotel");
    expect(state.pendingJob).toBeNull();
    expect(state.stale).toEqual({ scheme: false, placement: false, fields: false });
  });

  it("tolerates an empty destination list", () => {
    expect(initialViewState([]).destination).toBeNull();
  });
});

describe("destinationsOf", () => {
  it("collects scenario destinations, sorted and unique", () => {
    const layout: LayoutDoc = {
      nodes: [],
      edges: [],
      scenarios: [
        { source: "a", destination: "school" },
        { source: "b", destination: "hotel" },
        { source: "c", destination: "school" },
      ],
    };
    expect(destinationsOf(layout)).toEqual(["hotel", "school"]);
  });

  it("falls back to points of interest when no scenarios are declared", () => {
    const layout: LayoutDoc = {
      nodes: [
        { id: "gate", x: 0, y: 0, kind: "entrance" },
        { id: "cafe", x: 1, y: 0, kind: "poi" },
        { id: "mid", x: 2, y: 0, kind: "intersection" },
        { id: "bank", x: 3, y: 0, kind: "poi" },
      ],
      edges: [],
    };
    expect(destinationsOf(layout)).toEqual(["bank", "cafe"]);
  });
});

describe("overlay and destination transitions", () => {
  it("toggles one overlay and leaves the rest alone", () => {
    const state = toggleOverlay(initialViewState([]), "heatmap");
    expect(state.overlays).toEqual({ paths: true, signs: true, heatmap: false });
    expect(toggleOverlay(state, "heatmap").overlays.heatmap).toBe(true);
  });

  it("selects destinations", () => {
    const state = selectDestination(initialViewState(["a"]), "b");
    expect(state.destination).toBe("b");
  });
});

describe("job transitions", () => {
  const base = initialViewState(["school"]);

  it("tracks the pending job", () => {
    const state = jobStarted(base, "job-3", "refine");
    expect(state.pendingJob).toEqual({ id: "job-3", kind: "refine" });
  });

  it("marks everything downstream stale when an optimize settles", () => {
    const state = jobSettled(jobStarted(base, "job-1", "optimize"), "optimize");
    expect(state.pendingJob).toBeNull();
    expect(state.stale).toEqual({ scheme: true, placement: true, fields: true });
  });

  it("marks placement and fields stale when a refine settles", () => {
    const state = jobSettled(base, "refine");
    expect(state.stale).toEqual({ scheme: false, placement: true, fields: true });
  });

  it("marks only fields stale when a heatmap settles", () => {
    const state = jobSettled(base, "heatmap");
    expect(state.stale).toEqual({ scheme: false, placement: false, fields: true });
  });

  it("clears exactly the refreshed parts", () => {
    const stale = jobSettled(base, "optimize");
    const partial = refreshed(stale, { scheme: true, fields: true });
    expect(partial.stale).toEqual({ scheme: false, placement: true, fields: false });
    const done = refreshed(partial, { placement: true });
    expect(done.stale).toEqual({ scheme: false, placement: false, fields: false });
  });
});
