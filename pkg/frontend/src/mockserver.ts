// A scripted stand-in for the job service, used by the UI tests.
// Dispatches on the documented routes only and records every request.

export interface ScriptedJob {
  snapshots: Array<Record<string, unknown>>; // served in order; last one repeats
  resultMarkdown?: string;
  expireAfter?: number; // serve 404 after this many status calls
}

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function errorResponse(status: number, code: string, message: string): Response {
  return jsonResponse(status, { error: { code, message } });
}

export class MockServer {
  readonly requests: Array<{ method: string; url: string }> = [];
  readonly jobs = new Map<string, ScriptedJob>();
  private readonly statusCalls = new Map<string, number>();
  private nextId = 1;
  models = ["stub-echo", "gpt-test"];
  rejectUploadsWith: { status: number; code: string; message: string } | null = null;
  onCreate: ((job: ScriptedJob) => void) | null = null;

  /** Standard happy-path script: queued -> generating -> done. */
  script(markdown = "# Mock Book\n\nbody"): ScriptedJob {
    return {
      snapshots: [
        { state: "queued", progress: 0, chapter_progress: [0, 0] },
        { state: "extracting", progress: 10, chapter_progress: [0, 0] },
        { state: "generating", progress: 55, chapter_progress: [1, 3] },
        { state: "done", progress: 100, chapter_progress: [3, 3] },
      ],
      resultMarkdown: markdown,
    };
  }

  fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    const method = (init?.method ?? "GET").toUpperCase();
    const url = input;
    this.requests.push({ method, url });

    if (method === "POST" && url === "/api/jobs") {
      if (this.rejectUploadsWith) {
        const r = this.rejectUploadsWith;
        return errorResponse(r.status, r.code, r.message);
      }
      const id = `job-${this.nextId++}`;
      const job = this.script();
      this.onCreate?.(job);
      this.jobs.set(id, job);
      return jsonResponse(202, { job_id: id });
    }

    if (method === "GET" && url === "/api/models") {
      return jsonResponse(200, { models: this.models });
    }

    const statusMatch = /^\/api\/jobs\/([^/?]+)$/.exec(url);
    if (method === "GET" && statusMatch) {
      const id = statusMatch[1];
      const job = this.jobs.get(id);
      if (!job) return errorResponse(404, "UNKNOWN_JOB", `no job ${id}`);
      const calls = this.statusCalls.get(id) ?? 0;
      this.statusCalls.set(id, calls + 1);
      if (job.expireAfter !== undefined && calls >= job.expireAfter) {
        return errorResponse(404, "UNKNOWN_JOB", `job ${id} was cleaned up`);
      }
      const snapshot = job.snapshots[Math.min(calls, job.snapshots.length - 1)];
      return jsonResponse(200, {
        id,
        created_at: "2024-01-01T00:00:00Z",
        updated_at: "2024-01-01T00:00:00Z",
        error: null,
        artifact_paths: {},
        ...snapshot,
      });
    }

    const resultMatch = /^\/api\/jobs\/([^/?]+)\/result\?format=(.+)$/.exec(url);
    if (method === "GET" && resultMatch) {
      const job = this.jobs.get(resultMatch[1]);
      if (!job) return errorResponse(404, "UNKNOWN_JOB", "gone");
      if (resultMatch[2] === "markdown" && job.resultMarkdown !== undefined) {
        return new Response(job.resultMarkdown, {
          status: 200,
          headers: { "content-type": "text/markdown; charset=utf-8" },
        });
      }
      return errorResponse(409, "NOT_READY", "not ready");
    }

    if (method === "DELETE" && statusMatch) {
      if (!this.jobs.delete(statusMatch[1])) {
        return errorResponse(404, "UNKNOWN_JOB", "gone");
      }
      return new Response(null, { status: 204 });
    }

    return errorResponse(404, "UNKNOWN_ROUTE", `${method} ${url} is not a documented route`);
  };
}
