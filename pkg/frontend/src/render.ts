/** Canvas scene rendering. Drawing goes through the Scene2D interface, a
 * structural subset of CanvasRenderingContext2D, so tests can substitute a
 * recording context; the returned RenderStats summarize what was drawn. */

import {
  EDGE_COLOR,
  HOVER_COLOR,
  NODE_COLORS,
  PATH_COLOR,
  SIGN_ARROW_COLOR,
  SIGN_COLOR,
  STALE_ALPHA,
  legendStops,
  rateToColor,
} from "./colors.js";
import type { SampleChains } from "./geometry.js";
import { worldToScreen, type ViewTransform } from "./transform.js";
import type { OverlayName, StaleFlags } from "./state.js";
import type {
  BoardDoc,
  FieldDoc,
  LayoutDoc,
  PlacementDoc,
  Point,
  SchemeDoc,
} from "./types.js";

export interface GradientLike {
  addColorStop(offset: number, color: string): void;
}

export interface Scene2D {
  fillStyle: unknown;
  strokeStyle: unknown;
  lineWidth: number;
  globalAlpha: number;
  font: string;
  textAlign: string;
  textBaseline: string;
  lineCap: string;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
  save(): void;
  restore(): void;
  createLinearGradient(x0: number, y0: number, x1: number, y1: number): GradientLike;
}

export interface RenderInput {
  width: number;
  height: number;
  transform: ViewTransform;
  layout: LayoutDoc;
  /** Sign-level node positions (layout nodes plus auxiliary sign sites). */
  positions: Map<string, Point>;
  /** Heatmap polylines at field-sample resolution, or null to skip. */
  chains: SampleChains | null;
  overlays: Record<OverlayName, boolean>;
  stale: StaleFlags;
  scheme: SchemeDoc | null;
  placement: PlacementDoc | null;
  field: FieldDoc | null;
  hoverBoard?: BoardDoc | null;
}

export interface RenderStats {
  nodes: number;
  edges: number;
  pathSegments: number;
  boards: number;
  arrows: number;
  fieldSegments: number;
  legend: boolean;
}

const BACKGROUND = "#faf8f3";
const NODE_RADIUS: Record<string, number> = {
  poi: 7,
  entrance: 6,
  intersection: 4,
  auxiliary: 2,
};

function drawEdges(ctx: Scene2D, input: RenderInput): number {
  const { layout, positions, transform } = input;
  ctx.strokeStyle = EDGE_COLOR;
  ctx.lineWidth = 2;
  ctx.lineCap = "round";
  let drawn = 0;
  for (const edge of layout.edges) {
    const a = positions.get(edge.a);
    const b = positions.get(edge.b);
    if (!a || !b) {
      continue;
    }
    const sa = worldToScreen(transform, a);
    const sb = worldToScreen(transform, b);
    ctx.beginPath();
    ctx.moveTo(sa.x, sa.y);
    ctx.lineTo(sb.x, sb.y);
    ctx.stroke();
    drawn += 1;
  }
  return drawn;
}

function drawHeatmap(ctx: Scene2D, input: RenderInput): number {
  const { field, chains, transform } = input;
  if (!field || !chains) {
    return 0;
  }
  const rates = new Map<string, number>();
  for (const sample of field.samples) {
    rates.set(sample.node, sample.rate);
  }
  ctx.save();
  if (input.stale.fields) {
    ctx.globalAlpha = STALE_ALPHA;
  }
  ctx.lineWidth = 6;
  ctx.lineCap = "round";
  let drawn = 0;
  for (const chain of chains.chains) {
    for (let i = 1; i < chain.length; i += 1) {
      const rateA = rates.get(chain[i - 1]);
      const rateB = rates.get(chain[i]);
      const a = chains.positions.get(chain[i - 1]);
      const b = chains.positions.get(chain[i]);
      if (rateA === undefined || rateB === undefined || !a || !b) {
        continue;
      }
      const sa = worldToScreen(transform, a);
      const sb = worldToScreen(transform, b);
      const gradient = ctx.createLinearGradient(sa.x, sa.y, sb.x, sb.y);
      gradient.addColorStop(0, rateToColor(rateA));
      gradient.addColorStop(1, rateToColor(rateB));
      ctx.strokeStyle = gradient;
      ctx.beginPath();
      ctx.moveTo(sa.x, sa.y);
      ctx.lineTo(sb.x, sb.y);
      ctx.stroke();
      drawn += 1;
    }
  }
  ctx.restore();
  return drawn;
}

function drawPaths(ctx: Scene2D, input: RenderInput): number {
  const { scheme, positions, transform } = input;
  if (!scheme) {
    return 0;
  }
  ctx.save();
  if (input.stale.scheme) {
    ctx.globalAlpha = STALE_ALPHA;
  }
  ctx.strokeStyle = PATH_COLOR;
  ctx.lineWidth = 4;
  ctx.lineCap = "round";
  let segments = 0;
  for (const scenario of scheme.scenarios) {
    ctx.beginPath();
    let started = false;
    for (const nodeId of scenario.path) {
      const pos = positions.get(nodeId);
      if (!pos) {
        continue;
      }
      const s = worldToScreen(transform, pos);
      if (!started) {
        ctx.moveTo(s.x, s.y);
        started = true;
      } else {
        ctx.lineTo(s.x, s.y);
        segments += 1;
      }
    }
    ctx.stroke();
  }
  ctx.restore();
  return segments;
}

function drawNodes(ctx: Scene2D, input: RenderInput): number {
  const { layout, transform } = input;
  let drawn = 0;
  for (const node of layout.nodes) {
    const kind = node.kind ?? "intersection";
    const s = worldToScreen(transform, node);
    ctx.beginPath();
    ctx.arc(s.x, s.y, NODE_RADIUS[kind] ?? 4, 0, 2 * Math.PI);
    ctx.fillStyle = NODE_COLORS[kind] ?? NODE_COLORS.intersection;
    ctx.fill();
    ctx.strokeStyle = "#ffffff";
    ctx.lineWidth = 1.5;
    ctx.stroke();
    drawn += 1;
    if (kind === "poi" || kind === "entrance") {
      ctx.fillStyle = HOVER_COLOR;
      ctx.font = "12px system-ui, sans-serif";
      ctx.textAlign = "left";
      ctx.textBaseline = "bottom";
      ctx.fillText(node.label || node.id, s.x + 9, s.y - 4);
    }
  }
  return drawn;
}

function drawSigns(ctx: Scene2D, input: RenderInput): { boards: number; arrows: number } {
  const { placement, positions, transform } = input;
  if (!placement || placement.boards.length === 0) {
    return { boards: 0, arrows: 0 };
  }
  ctx.save();
  if (input.stale.placement) {
    ctx.globalAlpha = STALE_ALPHA;
  }
  let boards = 0;
  let arrows = 0;
  const size = 9;
  for (const board of placement.boards) {
    const pos = positions.get(board.node);
    if (!pos) {
      continue;
    }
    const s = worldToScreen(transform, pos);
    ctx.fillStyle = SIGN_COLOR;
    ctx.fillRect(s.x - size / 2, s.y - size / 2, size, size);
    ctx.strokeStyle = "#ffffff";
    ctx.lineWidth = 1;
    ctx.strokeRect(s.x - size / 2, s.y - size / 2, size, size);
    boards += 1;
    for (const sign of board.signs) {
      // Bearings are counterclockwise from +x in world axes; the screen's
      // y axis points the other way.
      const angle = (sign.bearing_deg * Math.PI) / 180;
      const dx = Math.cos(angle);
      const dy = -Math.sin(angle);
      const reach = 13;
      ctx.strokeStyle = SIGN_ARROW_COLOR;
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(s.x, s.y);
      ctx.lineTo(s.x + dx * reach, s.y + dy * reach);
      ctx.stroke();
      const tip = { x: s.x + dx * reach, y: s.y + dy * reach };
      const left = angle + Math.PI * 0.82;
      const right = angle - Math.PI * 0.82;
      ctx.beginPath();
      ctx.moveTo(tip.x, tip.y);
      ctx.lineTo(tip.x + Math.cos(left) * 5, tip.y - Math.sin(left) * 5);
      ctx.moveTo(tip.x, tip.y);
      ctx.lineTo(tip.x + Math.cos(right) * 5, tip.y - Math.sin(right) * 5);
      ctx.stroke();
      arrows += 1;
    }
  }
  ctx.restore();
  return { boards, arrows };
}

function drawHover(ctx: Scene2D, input: RenderInput): void {
  const board = input.hoverBoard;
  if (!board) {
    return;
  }
  const pos = input.positions.get(board.node);
  if (!pos) {
    return;
  }
  const s = worldToScreen(input.transform, pos);
  const lines = board.signs.map((sign) => `→ ${sign.destination}`);
  const width = Math.max(120, 9 * Math.max(...lines.map((l) => l.length)));
  const height = 18 * lines.length + 10;
  const x = s.x + 12;
  const y = s.y - height - 6;
  ctx.fillStyle = "rgba(255, 255, 255, 0.95)";
  ctx.fillRect(x, y, width, height);
  ctx.strokeStyle = HOVER_COLOR;
  ctx.lineWidth = 1;
  ctx.strokeRect(x, y, width, height);
  ctx.fillStyle = HOVER_COLOR;
  ctx.font = "13px system-ui, sans-serif";
  ctx.textAlign = "left";
  ctx.textBaseline = "top";
  lines.forEach((line, i) => {
    ctx.fillText(line, x + 8, y + 6 + 18 * i);
  });
}

function drawLegend(ctx: Scene2D, input: RenderInput): boolean {
  if (!input.field) {
    return false;
  }
  const x = 16;
  const barHeight = 110;
  const y = input.height - barHeight - 40;
  const stops = legendStops(12);
  const gradient = ctx.createLinearGradient(x, y + barHeight, x, y);
  for (const stop of stops) {
    gradient.addColorStop(stop.rate, stop.color);
  }
  ctx.fillStyle = gradient;
  ctx.fillRect(x, y, 14, barHeight);
  ctx.strokeStyle = HOVER_COLOR;
  ctx.lineWidth = 1;
  ctx.strokeRect(x, y, 14, barHeight);
  ctx.fillStyle = HOVER_COLOR;
  ctx.font = "12px system-ui, sans-serif";
  ctx.textAlign = "left";
  ctx.textBaseline = "middle";
  ctx.fillText("1.0 reaches", x + 20, y + 4);
  ctx.fillText("0.0 lost", x + 20, y + barHeight - 4);
  ctx.textBaseline = "top";
  ctx.fillText(`success toward ${input.field.destination}`, x, y + barHeight + 8);
  return true;
}

export function renderScene(ctx: Scene2D, input: RenderInput): RenderStats {
  ctx.clearRect(0, 0, input.width, input.height);
  ctx.fillStyle = BACKGROUND;
  ctx.fillRect(0, 0, input.width, input.height);

  const edges = drawEdges(ctx, input);
  const fieldSegments = input.overlays.heatmap ? drawHeatmap(ctx, input) : 0;
  const pathSegments = input.overlays.paths ? drawPaths(ctx, input) : 0;
  const nodes = drawNodes(ctx, input);
  const signStats = input.overlays.signs
    ? drawSigns(ctx, input)
    : { boards: 0, arrows: 0 };
  drawHover(ctx, input);
  const legend = input.overlays.heatmap ? drawLegend(ctx, input) : false;

  if (input.stale.scheme || input.stale.placement || input.stale.fields) {
    ctx.fillStyle = HOVER_COLOR;
    ctx.font = "13px system-ui, sans-serif";
    ctx.textAlign = "right";
    ctx.textBaseline = "top";
    ctx.fillText("updating…", input.width - 14, 12);
  }

  return {
    nodes,
    edges,
    pathSegments,
    boards: signStats.boards,
    arrows: signStats.arrows,
    fieldSegments,
    legend,
  };
}
