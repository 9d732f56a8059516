import { readFileSync } from "node:fs";

import { describe, expect, it } from "vitest";

import {
  edgeLength,
  nearestNodeId,
  nearestSample,
  positionsOf,
  sampleChains,
  segmentCount,
  signNodePositions,
  subdivide,
} from "../src/geometry.js";
import type { FieldSampleDoc, LayoutDoc } from "../src/types.js";

const city = JSON.parse(
  readFileSync(new URL("./fixtures/city_layout.json", import.meta.url), "utf-8"),
) as LayoutDoc;
const citySignNodes = JSON.parse(
  readFileSync(new URL("./fixtures/city_sign_nodes.json", import.meta.url), "utf-8"),
) as Record<string, [number, number]>;

function line(a: string, b: string, ax: number, bx: number): LayoutDoc {
  return {
    nodes: [
      { id: a, x: ax, y: 0 },
      { id: b, x: bx, y: 0 },
    ],
    edges: [{ a, b }],
  };
}

describe("segmentCount", () => {
  it("uses the smallest count with segments strictly under the spacing", () => {
    expect(segmentCount(120, 50)).toBe(3);
    expect(segmentCount(51, 50)).toBe(2);
    expect(segmentCount(49.9, 50)).toBe(1);
  });

  it("bumps the count when the even split lands exactly on the spacing", () => {
    expect(segmentCount(100, 50)).toBe(3);
    expect(segmentCount(50, 50)).toBe(2);
  });
});

describe("subdivide", () => {
  it("splits a long edge into equal pieces with deterministic ids", () => {
    const layout = line("a", "b", 0, 120);
    const positions = positionsOf(layout);
    const sub = subdivide(positions, [{ a: "a", b: "b", length: 120 }], 50);
    expect(sub.positions.get("a+b.1")).toEqual({ x: 40, y: 0 });
    expect(sub.positions.get("a+b.2")).toEqual({ x: 80, y: 0 });
    expect(sub.edges).toEqual([
      { a: "a", b: "a+b.1", length: 40 },
      { a: "a+b.1", b: "a+b.2", length: 40 },
      { a: "a+b.2", b: "b", length: 40 },
    ]);
  });

  it("orders ids from the lexicographically smaller endpoint", () => {
    const layout = line("b", "a", 120, 0);
    const positions = positionsOf(layout);
    const sub = subdivide(positions, [{ a: "b", b: "a", length: 120 }], 50);
    // lo is "a" at x=0, so the first interior node sits a third of the way
    // from it regardless of how the edge was written down.
    expect(sub.positions.get("a+b.1")).toEqual({ x: 40, y: 0 });
  });

  it("keeps edges at or under the spacing untouched", () => {
    const layout = line("a", "b", 0, 50);
    const positions = positionsOf(layout);
    const sub = subdivide(positions, [{ a: "a", b: "b", length: 50 }], 50);
    expect(sub.positions.size).toBe(2);
    expect(sub.edges).toEqual([{ a: "a", b: "b", length: 50 }]);
  });

  it("splits by declared walking length but interpolates geometrically", () => {
    const layout = line("a", "b", 0, 120);
    const positions = positionsOf(layout);
    // Declared length 130 forces 3 pieces; positions still sit on the line.
    const sub = subdivide(positions, [{ a: "a", b: "b", length: 130 }], 50);
    expect(sub.positions.get("a+b.1")).toEqual({ x: 40, y: 0 });
    expect(sub.edges[0].length).toBeCloseTo(130 / 3, 12);
  });
});

describe("edgeLength", () => {
  it("prefers the declared length and falls back to euclidean", () => {
    const positions = positionsOf(line("a", "b", 0, 120));
    expect(edgeLength({ a: "a", b: "b", length: 200 }, positions)).toBe(200);
    expect(edgeLength({ a: "a", b: "b" }, positions)).toBe(120);
  });
});

describe("signNodePositions", () => {
  it("reproduces the server's auxiliary node ids and coordinates exactly", () => {
    const positions = signNodePositions(city, 50);
    expect(positions.size).toBe(Object.keys(citySignNodes).length);
    for (const [id, [x, y]] of Object.entries(citySignNodes)) {
      const pos = positions.get(id);
      expect(pos, `missing node ${id}`).toBeDefined();
      expect(pos!.x, `x of ${id}`).toBe(x);
      expect(pos!.y, `y of ${id}`).toBe(y);
    }
  });
});

describe("sampleChains", () => {
  it("walks each edge through both subdivision levels in order", () => {
    const layout = line("a", "b", 0, 120);
    const { positions, chains } = sampleChains(layout, 50, 25);
    expect(chains).toHaveLength(1);
    const xs = chains[0].map((id) => positions.get(id)!.x);
    expect(xs).toEqual([0, 20, 40, 60, 80, 100, 120]);
  });

  it("handles chains long enough for double-digit indices", () => {
    // Eleven pieces produce ids a+z.1 .. a+z.10, whose lexicographic order
    // differs from the walking order; the chain must stay geometric.
    const layout = line("a", "z", 0, 120);
    const { positions, chains } = sampleChains(layout, 11, 1000);
    const xs = chains[0].map((id) => positions.get(id)!.x);
    const sorted = [...xs].sort((p, q) => p - q);
    expect(xs).toEqual(sorted);
    expect(xs).toHaveLength(12);
    expect(xs[0]).toBe(0);
    expect(xs[11]).toBe(120);
  });

  it("covers every city field sample site at the default intervals", () => {
    const { positions, chains } = sampleChains(city, 50, 25);
    const onChains = new Set(chains.flat());
    // 30 layout nodes + 90 sign-level nodes + one finer site per 40m piece.
    expect(positions.size).toBe(255);
    expect(onChains.size).toBe(255);
  });
});

describe("hit testing", () => {
  const samples: FieldSampleDoc[] = [
    { node: "s1", x: 0, y: 0, rate: 0.2 },
    { node: "s2", x: 100, y: 0, rate: 0.9 },
  ];

  it("finds the nearest sample with its distance", () => {
    const near = nearestSample(samples, { x: 70, y: 10 });
    expect(near?.sample.node).toBe("s2");
    expect(near?.dist).toBeCloseTo(Math.hypot(30, 10), 12);
    expect(nearestSample([], { x: 0, y: 0 })).toBeNull();
  });

  it("limits node lookups to the radius", () => {
    const positions = new Map([
      ["n1", { x: 0, y: 0 }],
      ["n2", { x: 50, y: 0 }],
    ]);
    expect(nearestNodeId(["n1", "n2"], positions, { x: 45, y: 0 }, 10)).toBe("n2");
    expect(nearestNodeId(["n1", "n2"], positions, { x: 25, y: 0 }, 10)).toBeNull();
  });
});
