import { readFileSync } from "node:fs";

import { describe, expect, it } from "vitest";

import { rateToColor } from "../src/colors.js";
import { positionsOf, sampleChains } from "../src/geometry.js";
import { renderScene, type GradientLike, type RenderInput, type Scene2D } from "../src/render.js";
import type { FieldDoc, LayoutDoc, PlacementDoc, SchemeDoc } from "../src/types.js";

const city = JSON.parse(
  readFileSync(new URL("./fixtures/city_layout.json", import.meta.url), "utf-8"),
) as LayoutDoc;

class FakeGradient implements GradientLike {
  stops: { offset: number; color: string }[] = [];

  addColorStop(offset: number, color: string): void {
    this.stops.push({ offset, color });
  }
}

class FakeScene implements Scene2D {
  fillStyle: unknown = "";
  strokeStyle: unknown = "";
  lineWidth = 0;
  globalAlpha = 1;
  font = "";
  textAlign = "";
  textBaseline = "";
  lineCap = "";
  texts: string[] = [];
  gradients: FakeGradient[] = [];
  rects = 0;

  beginPath(): void {}
  moveTo(): void {}
  lineTo(): void {}
  arc(): void {}
  stroke(): void {}
  fill(): void {}
  fillRect(): void {
    this.rects += 1;
  }
  strokeRect(): void {}
  clearRect(): void {}
  fillText(text: string): void {
    this.texts.push(text);
  }
  save(): void {}
  restore(): void {}
  createLinearGradient(): GradientLike {
    const gradient = new FakeGradient();
    this.gradients.push(gradient);
    return gradient;
  }
}

const IDENTITY = { scale: 1, tx: 0, ty: 0 };

function baseInput(layout: LayoutDoc): RenderInput {
  return {
    width: 800,
    height: 600,
    transform: IDENTITY,
    layout,
    positions: positionsOf(layout),
    chains: null,
    overlays: { paths: true, signs: true, heatmap: true },
    stale: { scheme: false, placement: false, fields: false },
    scheme: null,
    placement: null,
    field: null,
  };
}

const TWO_NODES: LayoutDoc = {
  nodes: [
    { id: "A", x: 0, y: 0, kind: "entrance" },
    { id: "B", x: 0, y: 120, kind: "poi" },
  ],
  edges: [{ a: "A", b: "B" }],
};

describe("renderScene", () => {
  it("draws one mark per city node and edge", () => {
    const scene = new FakeScene();
    const stats = renderScene(scene, baseInput(city));
    expect(stats.nodes).toBe(30);
    expect(stats.edges).toBe(45);
    expect(stats.fieldSegments).toBe(0);
    expect(stats.legend).toBe(false);
    expect(scene.texts).toContain("Hotel");
    expect(scene.texts).toContain("Post Office");
  });

  it("draws no glyphs for an empty placement", () => {
    const scene = new FakeScene();
    const input = baseInput(city);
    input.placement = { entries: [], boards: [] };
    const stats = renderScene(scene, input);
    expect(stats.boards).toBe(0);
    expect(stats.arrows).toBe(0);
  });

  it("draws a glyph and an arrow per sign", () => {
    const scene = new FakeScene();
    const input = baseInput(TWO_NODES);
    const placement: PlacementDoc = {
      entries: [{ node: "A", destination: "B", next_node: "B" }],
      boards: [
        {
          node: "A",
          signs: [
            { destination: "B", bearing_deg: 90 },
            { destination: "A", bearing_deg: 270 },
          ],
        },
      ],
    };
    input.placement = placement;
    const stats = renderScene(scene, input);
    expect(stats.boards).toBe(1);
    expect(stats.arrows).toBe(2);
  });

  it("hides paths when the overlay is off", () => {
    const scheme: SchemeDoc = {
      scenarios: [
        { source: "A", destination: "B", importance: 1, path: ["A", "B"], length: 120 },
      ],
      cost: {
        local_length: 0,
        local_node: 0,
        local_angle: 0,
        global_length: 0,
        global_node: 0,
        total: 0,
      },
    };
    const on = baseInput(TWO_NODES);
    on.scheme = scheme;
    expect(renderScene(new FakeScene(), on).pathSegments).toBe(1);

    const off = baseInput(TWO_NODES);
    off.scheme = scheme;
    off.overlays = { ...off.overlays, paths: false };
    expect(renderScene(new FakeScene(), off).pathSegments).toBe(0);
  });

  it("paints a uniform success field solid blue with a legend", () => {
    const chains = sampleChains(TWO_NODES, 50, 25);
    const field: FieldDoc = {
      destination: "B",
      interval: 25,
      samples: [...chains.positions.entries()].map(([node, p]) => ({
        node,
        x: p.x,
        y: p.y,
        rate: 1,
      })),
    };
    const input = baseInput(TWO_NODES);
    input.chains = chains;
    input.field = field;
    const scene = new FakeScene();
    const stats = renderScene(scene, input);
    // 120m edge: three 40m sign segments, each halved by the 25m sampling.
    expect(stats.fieldSegments).toBe(6);
    expect(stats.legend).toBe(true);
    const blue = rateToColor(1);
    const segmentGradients = scene.gradients.slice(0, stats.fieldSegments);
    expect(segmentGradients).toHaveLength(6);
    for (const gradient of segmentGradients) {
      expect(gradient.stops).toHaveLength(2);
      for (const stop of gradient.stops) {
        expect(stop.color).toBe(blue);
      }
    }
    // The legend gradient still spans the whole scale.
    const legend = scene.gradients.at(-1)!;
    expect(legend.stops.length).toBeGreaterThan(2);
    expect(legend.stops[0].color).toBe(rateToColor(0));
    expect(legend.stops.at(-1)!.color).toBe(rateToColor(1));
    expect(scene.texts).toContain("success toward B");
  });

  it("skips the heatmap and legend when the overlay is off", () => {
    const chains = sampleChains(TWO_NODES, 50, 25);
    const input = baseInput(TWO_NODES);
    input.chains = chains;
    input.field = {
      destination: "B",
      interval: 25,
      samples: [{ node: "A", x: 0, y: 0, rate: 1 }],
    };
    input.overlays = { ...input.overlays, heatmap: false };
    const stats = renderScene(new FakeScene(), input);
    expect(stats.fieldSegments).toBe(0);
    expect(stats.legend).toBe(false);
  });

  it("marks the scene while documents are stale", () => {
    const scene = new FakeScene();
    const input = baseInput(TWO_NODES);
    input.stale = { ...input.stale, placement: true };
    renderScene(scene, input);
    expect(scene.texts).toContain("updating…");
  });

  it("lists sign destinations for the hovered board", () => {
    const scene = new FakeScene();
    const input = baseInput(TWO_NODES);
    input.hoverBoard = {
      node: "A",
      signs: [
        { destination: "school", bearing_deg: 0 },
        { destination: "hotel", bearing_deg: 180 },
      ],
    };
    renderScene(scene, input);
    expect(scene.texts).toContain("→ school");
    expect(scene.texts).toContain("→ hotel");
  });
});
