/** Pan/zoom mapping between world and screen coordinates.
 *
 * World y points up (layout convention), screen y points down, so the
 * vertical axis flips: screen = (tx + scale * x, ty - scale * y).
 */

import type { Point } from "./types.js";

export interface ViewTransform {
  scale: number;
  tx: number;
  ty: number;
}

export interface Bounds {
  minX: number;
  minY: number;
  maxX: number;
  maxY: number;
}

export const MIN_SCALE = 0.05;
export const MAX_SCALE = 40;

export function worldToScreen(t: ViewTransform, p: Point): Point {
  return { x: t.tx + t.scale * p.x, y: t.ty - t.scale * p.y };
}

export function screenToWorld(t: ViewTransform, p: Point): Point {
  return { x: (p.x - t.tx) / t.scale, y: (t.ty - p.y) / t.scale };
}

/** Shift the view by a screen-space delta (drag panning). */
export function panBy(t: ViewTransform, dx: number, dy: number): ViewTransform {
  return { scale: t.scale, tx: t.tx + dx, ty: t.ty + dy };
}

/** Scale around a fixed screen point so the world point under the cursor
 * stays put. The factor is clamped to keep the scale inside
 * [MIN_SCALE, MAX_SCALE]. */
export function zoomAt(t: ViewTransform, at: Point, factor: number): ViewTransform {
  const scale = Math.min(MAX_SCALE, Math.max(MIN_SCALE, t.scale * factor));
  const applied = scale / t.scale;
  return {
    scale,
    tx: at.x - (at.x - t.tx) * applied,
    ty: at.y - (at.y - t.ty) * applied,
  };
}

export function boundsOf(points: Iterable<Point>): Bounds | null {
  let bounds: Bounds | null = null;
  for (const p of points) {
    if (bounds === null) {
      bounds = { minX: p.x, minY: p.y, maxX: p.x, maxY: p.y };
    } else {
      bounds.minX = Math.min(bounds.minX, p.x);
      bounds.minY = Math.min(bounds.minY, p.y);
      bounds.maxX = Math.max(bounds.maxX, p.x);
      bounds.maxY = Math.max(bounds.maxY, p.y);
    }
  }
  return bounds;
}

/** Transform that centers the bounds in a width x height viewport with a
 * uniform margin. Degenerate bounds (a single point) get scale 1. */
export function fitBounds(
  bounds: Bounds,
  width: number,
  height: number,
  margin = 40,
): ViewTransform {
  const spanX = bounds.maxX - bounds.minX;
  const spanY = bounds.maxY - bounds.minY;
  const fitX = spanX > 0 ? (width - 2 * margin) / spanX : Infinity;
  const fitY = spanY > 0 ? (height - 2 * margin) / spanY : Infinity;
  let scale = Math.min(fitX, fitY);
  if (!Number.isFinite(scale)) {
    scale = 1;
  }
  scale = Math.min(MAX_SCALE, Math.max(MIN_SCALE, scale));
  const cx = (bounds.minX + bounds.maxX) / 2;
  const cy = (bounds.minY + bounds.maxY) / 2;
  return {
    scale,
    tx: width / 2 - scale * cx,
    ty: height / 2 + scale * cy,
  };
}
