// Typed client for the job service REST API. Only the documented routes
// are used; the fetch implementation is injectable for contract tests.

export interface JobSnapshot {
  id: string;
  state: string;
  progress: number;
  chapter_progress: [number, number];
  created_at: string;
  updated_at: string;
  error: string | null;
  artifact_paths: Record<string, string>;
}

export interface CustomizationPayload {
  output_language: string;
  style: string;
  difficulty: string;
  objectives: string[];
  model_id: string;
  include_exercises: boolean;
}

export interface ApiError {
  status: number;
  code: string;
  message: string;
}

export class RequestFailed extends Error {
  constructor(public readonly detail: ApiError) {
    super(`${detail.code}: ${detail.message}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorFrom(resp: Response): Promise<ApiError> {
  let code = "HTTP_" + resp.status;
  let message = resp.statusText || `request failed with ${resp.status}`;
  try {
    const body = await resp.json();
    if (body && body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body: keep the status text
  }
  return { status: resp.status, code, message };
}

export class ApiClient {
  constructor(
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private readonly base: string = "",
  ) {}

  async createJob(file: File, customization: CustomizationPayload): Promise<string> {
    const form = new FormData();
    form.append("file", file, file.name);
    form.append("customization", JSON.stringify(customization));
    const resp = await this.fetchImpl(`${this.base}/api/jobs`, { method: "POST", body: form });
    if (resp.status !== 202) throw new RequestFailed(await errorFrom(resp));
    const body = await resp.json();
    return body.job_id as string;
  }

  async getJob(jobId: string): Promise<JobSnapshot> {
    const resp = await this.fetchImpl(`${this.base}/api/jobs/${jobId}`);
    if (!resp.ok) throw new RequestFailed(await errorFrom(resp));
    return (await resp.json()) as JobSnapshot;
  }

  async getResult(jobId: string, format: "markdown" | "deck-json"): Promise<Uint8Array> {
    const resp = await this.fetchImpl(
      `${this.base}/api/jobs/${jobId}/result?format=${format}`,
    );
    if (!resp.ok) throw new RequestFailed(await errorFrom(resp));
    return new Uint8Array(await resp.arrayBuffer());
  }

  async deleteJob(jobId: string): Promise<void> {
    const resp = await this.fetchImpl(`${this.base}/api/jobs/${jobId}`, { method: "DELETE" });
    if (resp.status !== 204) throw new RequestFailed(await errorFrom(resp));
  }

  async listModels(): Promise<string[]> {
    const resp = await this.fetchImpl(`${this.base}/api/models`);
    if (!resp.ok) throw new RequestFailed(await errorFrom(resp));
    const body = await resp.json();
    return (body.models ?? []) as string[];
  }
}
