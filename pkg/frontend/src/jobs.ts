/** Job polling: the server runs optimize/refine/heatmap asynchronously and
 * the studio polls the job document once a second until it settles. */

import type { JobDoc } from "./types.js";

export class JobFailure extends Error {
  constructor(readonly job: JobDoc) {
    super(job.error ?? `job ${job.id} failed`);
    this.name = "JobFailure";
  }
}

export type SleepFn = (ms: number) => Promise<void>;

const realSleep: SleepFn = (ms) => new Promise((resolve) => setTimeout(resolve, ms));

export interface PollOptions {
  intervalMs?: number;
  onUpdate?: (job: JobDoc) => void;
  sleep?: SleepFn;
}

/** Resolve with the finished job document, polling at the given interval
 * (1s by default). A job that settles in the "error" state rejects with
 * JobFailure carrying the final document. */
export async function pollJob(
  fetchJob: (id: string) => Promise<JobDoc>,
  id: string,
  options: PollOptions = {},
): Promise<JobDoc> {
  const interval = options.intervalMs ?? 1000;
  const sleep = options.sleep ?? realSleep;
  for (;;) {
    const job = await fetchJob(id);
    options.onUpdate?.(job);
    if (job.status === "done") {
      return job;
    }
    if (job.status === "error") {
      throw new JobFailure(job);
    }
    await sleep(interval);
  }
}

/** Human-readable progress line for the status bar. */
export function describeProgress(job: JobDoc): string {
  const progress = job.progress;
  if (!progress) {
    return `${job.kind}: ${job.status}`;
  }
  if (progress.iteration !== undefined && progress.best_cost !== undefined) {
    return `${job.kind}: iteration ${progress.iteration}, best cost ${progress.best_cost.toFixed(4)}`;
  }
  if (progress.completed !== undefined && progress.total !== undefined) {
    return `${job.kind}: ${progress.completed}/${progress.total} destinations`;
  }
  return `${job.kind}: ${job.status}`;
}
