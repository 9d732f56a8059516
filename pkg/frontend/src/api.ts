/** Typed client for the project API. Every request goes through /api/v1;
 * the studio never touches project files directly. */

import type {
  ConfigDoc,
  ErrorDoc,
  FieldDoc,
  FixResultDoc,
  JobDoc,
  LayoutDoc,
  PlacementDoc,
  SchemeDoc,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** The surface the rest of the studio programs against; StudioApi is the
 * HTTP implementation and tests substitute in-memory fakes. */
export type ProjectApi = Pick<
  StudioApi,
  | "layout"
  | "config"
  | "scheme"
  | "placement"
  | "field"
  | "jobs"
  | "job"
  | "saveConfig"
  | "startOptimize"
  | "startRefine"
  | "startHeatmap"
  | "fixBlindZone"
>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function decodeError(response: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const doc = (await response.json()) as ErrorDoc;
    if (doc && doc.error) {
      code = doc.error.code ?? code;
      message = doc.error.message ?? message;
    }
  } catch {
    // non-JSON body; keep the status line
  }
  return new ApiError(response.status, code, message);
}

export class StudioApi {
  private readonly fetchFn: FetchLike;

  constructor(
    private readonly base = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.base}/api/v1${path}`, init);
    if (!response.ok) {
      throw await decodeError(response);
    }
    return (await response.json()) as T;
  }

  private async getOrNull<T>(path: string): Promise<T | null> {
    try {
      return await this.request<T>("GET", path);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        return null;
      }
      throw err;
    }
  }

  layout(): Promise<LayoutDoc> {
    return this.request("GET", "/layout");
  }

  config(): Promise<ConfigDoc> {
    return this.request("GET", "/config");
  }

  /** null until the scheme optimizer has run. */
  scheme(): Promise<SchemeDoc | null> {
    return this.getOrNull("/scheme");
  }

  /** null until the sign refiner has run. */
  placement(): Promise<PlacementDoc | null> {
    return this.getOrNull("/placement");
  }

  /** null until a heatmap toward this destination has been computed. */
  field(destination: string): Promise<FieldDoc | null> {
    return this.getOrNull(`/field/${encodeURIComponent(destination)}`);
  }

  async jobs(): Promise<JobDoc[]> {
    const doc = await this.request<{ jobs: JobDoc[] }>("GET", "/jobs");
    return doc.jobs;
  }

  job(id: string): Promise<JobDoc> {
    return this.request("GET", `/jobs/${encodeURIComponent(id)}`);
  }

  saveConfig(config: ConfigDoc): Promise<ConfigDoc> {
    return this.request("POST", "/config", config);
  }

  startOptimize(config?: ConfigDoc): Promise<JobDoc> {
    return this.request("POST", "/optimize", config ? { config } : {});
  }

  startRefine(config?: ConfigDoc): Promise<JobDoc> {
    return this.request("POST", "/refine", config ? { config } : {});
  }

  /** Omitting the destination recomputes fields for every scenario destination. */
  startHeatmap(destination?: string): Promise<JobDoc> {
    return this.request("POST", "/heatmap", destination ? { destination } : {});
  }

  fixBlindZone(x: number, y: number, destination: string): Promise<FixResultDoc> {
    return this.request("POST", "/blindzone-fix", { x, y, destination });
  }
}
