/**
 * Live round-trip tests against a running service.
 *
 * Skipped unless WAYFINDER_API points at a server, e.g.
 *
 *   wayfinder serve /tmp/proj --port 8123 &
 *   WAYFINDER_API=http://127.0.0.1:8123 npx vitest run tests/integration.test.ts
 *
 * The parameter-direction sweep (20 jobs) additionally requires
 * WAYFINDER_SWEEP=1; it takes a couple of minutes.
 */
import { describe, expect, it } from "vitest";

import { StudioApi } from "../src/api.js";
import { StudioController } from "../src/controller.js";
import { sampleChains } from "../src/geometry.js";
import { pollJob } from "../src/jobs.js";
import { DEFAULT_CONFIG, setPath } from "../src/panel.js";
import type { ConfigDoc, FieldSampleDoc } from "../src/types.js";

const API = process.env.WAYFINDER_API ?? "";
const SWEEP = process.env.WAYFINDER_SWEEP === "1";

function withSeed(config: ConfigDoc, seed: number): ConfigDoc {
  return setPath(config, "seed", seed);
}

function median(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  return sorted[Math.floor(sorted.length / 2)];
}

async function runToCompletion(
  api: StudioApi,
  start: () => Promise<{ id: string }>,
  intervalMs: number,
): Promise<void> {
  const job = await start();
  const finished = await pollJob((id) => api.job(id), job.id, { intervalMs });
  expect(finished.status).toBe("done");
}

describe.skipIf(!API)("live service", () => {
  it(
    "loads the city, repairs a red sample in under 3s, and reloads identically",
    { timeout: 300_000 },
    async () => {
      const api = new StudioApi(API);
      await api.saveConfig(withSeed(DEFAULT_CONFIG, 0));
      await runToCompletion(api, () => api.startOptimize(), 500);
      await runToCompletion(api, () => api.startRefine(), 500);
      await runToCompletion(api, () => api.startHeatmap(), 500);

      const controller = new StudioController(api);
      await controller.load();
      const data = controller.data!;
      expect(data.layout.nodes).toHaveLength(30);
      expect(data.destinations).toEqual(["hotel", "post_office", "restaurant", "school"]);
      expect(data.scheme).not.toBeNull();
      expect(data.placement).not.toBeNull();
      expect(Object.keys(data.fields).sort()).toEqual(data.destinations);

      // Every sign the server placed must sit on a node the client can
      // position, and every field sample must land on the client's own
      // resampling of the layout at the same coordinates.
      for (const board of data.placement!.boards) {
        expect(controller.signPositions.has(board.node)).toBe(true);
      }
      for (const destination of data.destinations) {
        const field = data.fields[destination];
        const chains = sampleChains(data.layout, data.config.sign_spacing, field.interval);
        expect(chains.positions.size).toBe(field.samples.length);
        for (const sample of field.samples) {
          const pos = chains.positions.get(sample.node);
          expect(pos).toBeDefined();
          expect(pos!.x).toBeCloseTo(sample.x, 9);
          expect(pos!.y).toBeCloseTo(sample.y, 9);
        }
      }

      controller.selectDestination("school");
      const field = controller.currentField()!;
      const worst = field.samples.reduce((a, b) => (a.rate <= b.rate ? a : b));
      expect(worst.rate).toBeLessThan(0.5);

      const before = performance.now();
      const outcome = await controller.clickAt({ x: worst.x, y: worst.y });
      const elapsed = performance.now() - before;
      expect(outcome.kind).toBe("fixed");
      expect(elapsed).toBeLessThan(3000);

      const updated = controller
        .currentField()!
        .samples.find((s: FieldSampleDoc) => s.node === worst.node)!;
      expect(updated.rate).toBeGreaterThan(0.9);
      expect(controller.data!.placement!.entries.length).toBeGreaterThan(
        data.placement!.entries.length - 1,
      );

      const again = new StudioController(api);
      await again.load();
      expect(again.data).toEqual(controller.data);
      expect(again.state.destination).toBe("hotel");
      expect(again.state.overlays).toEqual({ paths: true, signs: true, heatmap: true });
    },
  );

  it.skipIf(!SWEEP)(
    "parameter changes move the sign count in the expected direction",
    { timeout: 600_000 },
    async () => {
      const api = new StudioApi(API);
      const variants: Record<string, (config: ConfigDoc) => ConfigDoc> = {
        default: (config) => config,
        miss: (config) => setPath(config, "agent.miss_prob", 0.1),
        vision: (config) => setPath(config, "agent.visibility", 250),
        cheap_failure: (config) => setPath(config, "sign_weights.failure", 0.01),
      };
      const counts: Record<string, number[]> = {};
      for (const seed of [0, 1, 2, 3, 4]) {
        const base = withSeed(DEFAULT_CONFIG, seed);
        await api.saveConfig(base);
        await runToCompletion(api, () => api.startOptimize(), 250);
        for (const [name, tweak] of Object.entries(variants)) {
          await api.saveConfig(tweak(base));
          await runToCompletion(api, () => api.startRefine(), 250);
          const placement = await api.placement();
          (counts[name] ??= []).push(placement!.entries.length);
        }
      }
      const defaults = median(counts.default);
      expect(median(counts.miss)).toBeGreaterThan(defaults);
      expect(median(counts.vision)).toBeLessThan(defaults);
      expect(median(counts.cheap_failure)).toBeLessThan(defaults);
    },
  );
});
