import type {
  AnalysisResponse,
  DiffResponse,
  DraftJson,
  HistoryResponse,
  ImportResponse,
  Level,
  ModelResponse,
  PriorityEntry,
  ProvenanceResponse,
  SnapshotResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
    /** extra fields from the error body, e.g. `missing` on 409 */
    readonly extra: Record<string, unknown> = {},
  ) {
    super(`${status}: ${detail}`);
  }
}

async function parse<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const { detail, ...extra } = body as Record<string, unknown>;
    throw new ApiError(
      response.status,
      typeof detail === "string" ? detail : response.statusText,
      extra,
    );
  }
  return body as T;
}

export interface AnalyzeOptions {
  lambda?: number;
  epsilon?: number;
  maxIterations?: number;
  deterministic?: boolean;
}

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  /** Upload a piStar or canonical JSON document. */
  async importModel(text: string): Promise<ImportResponse> {
    return parse(
      await fetch(this.url("/models"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: text,
      }),
    );
  }

  async getModel(modelId: string): Promise<ModelResponse> {
    return parse(await fetch(this.url(`/models/${modelId}`)));
  }

  async setPriorities(
    modelId: string,
    edits: {
      elementPriorities?: Record<string, PriorityEntry>;
      stakeholderWeights?: Record<string, Level>;
    },
  ): Promise<{ modelId: string; draft: DraftJson }> {
    return parse(
      await fetch(this.url(`/models/${modelId}/priorities`), {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(edits),
      }),
    );
  }

  async analyze(
    modelId: string,
    options: AnalyzeOptions = {},
  ): Promise<AnalysisResponse> {
    return parse(
      await fetch(this.url(`/models/${modelId}/analyze`), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(options),
      }),
    );
  }

  async getResult(modelId: string, version: number): Promise<SnapshotResponse> {
    return parse(await fetch(this.url(`/models/${modelId}/results/${version}`)));
  }

  async provenance(
    modelId: string,
    elementId: string,
    version: number,
  ): Promise<ProvenanceResponse> {
    return parse(
      await fetch(
        this.url(
          `/models/${modelId}/elements/${elementId}/provenance?version=${version}`,
        ),
      ),
    );
  }

  async history(modelId: string): Promise<HistoryResponse> {
    return parse(await fetch(this.url(`/models/${modelId}/history`)));
  }

  async diff(
    modelId: string,
    from: number,
    to: number,
  ): Promise<DiffResponse> {
    return parse(
      await fetch(this.url(`/models/${modelId}/diff?from=${from}&to=${to}`)),
    );
  }
}
