/** Shared palette and the success-rate color ramp.
 *
 * Heatmap convention: rate 1.0 renders blue, rate 0.0 renders red, with the
 * hue interpolated linearly in between (through green around 0.5).
 */

export const EDGE_COLOR = "#c8c4bc";
export const PATH_COLOR = "#e8b931";
export const SIGN_COLOR = "#2f6f4e";
export const SIGN_ARROW_COLOR = "#1d4733";
export const HOVER_COLOR = "#222222";
export const STALE_ALPHA = 0.35;

export const NODE_COLORS: Record<string, string> = {
  intersection: "#8d8d8d",
  entrance: "#7a4fd1",
  poi: "#d1593a",
  auxiliary: "#bbbbbb",
};

const HUE_BLUE = 240;
const SATURATION = 85;
const LIGHTNESS = 45;

function clamp01(value: number): number {
  if (Number.isNaN(value)) {
    return 0;
  }
  return Math.min(1, Math.max(0, value));
}

/** Map a success rate in [0, 1] to a CSS color; out-of-range rates clamp. */
export function rateToColor(rate: number): string {
  const hue = HUE_BLUE * clamp01(rate);
  return `hsl(${hue}, ${SATURATION}%, ${LIGHTNESS}%)`;
}

export interface LegendStop {
  rate: number;
  color: string;
}

/** Evenly spaced legend entries from rate 0 (red) up to 1 (blue). */
export function legendStops(count = 5): LegendStop[] {
  if (count < 2) {
    throw new Error("a legend needs at least two stops");
  }
  const stops: LegendStop[] = [];
  for (let i = 0; i < count; i += 1) {
    const rate = i / (count - 1);
    stops.push({ rate, color: rateToColor(rate) });
  }
  return stops;
}
