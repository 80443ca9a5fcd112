import { describe, expect, it } from "vitest";

import { ApiClient, RequestFailed } from "./api.js";
import { MockServer } from "./mockserver.js";

const CUSTOMIZATION = {
  output_language: "en",
  style: "academic",
  difficulty: "introductory",
  objectives: [],
  model_id: "stub-echo",
  include_exercises: true,
};

function makeFile(name = "deck.pptx"): File {
  return new File([new Uint8Array([0x50, 0x4b, 0x03, 0x04])], name);
}

describe("ApiClient", () => {
  it("creates jobs via POST /api/jobs with file and customization", async () => {
    const server = new MockServer();
    const api = new ApiClient(server.fetch);
    const jobId = await api.createJob(makeFile(), CUSTOMIZATION);
    expect(jobId).toBe("job-1");
    expect(server.requests).toEqual([{ method: "POST", url: "/api/jobs" }]);
  });

  it("maps error envelopes onto RequestFailed", async () => {
    const server = new MockServer();
    server.rejectUploadsWith = { status: 400, code: "INVALID_FILE_TYPE", message: "bad ext" };
    const api = new ApiClient(server.fetch);
    await expect(api.createJob(makeFile("x.txt"), CUSTOMIZATION)).rejects.toThrowError(
      RequestFailed,
    );
    try {
      await api.createJob(makeFile("x.txt"), CUSTOMIZATION);
    } catch (err) {
      const failure = err as RequestFailed;
      expect(failure.detail.status).toBe(400);
      expect(failure.detail.code).toBe("INVALID_FILE_TYPE");
      expect(failure.detail.message).toBe("bad ext");
    }
  });

  it("fetches status snapshots", async () => {
    const server = new MockServer();
    const api = new ApiClient(server.fetch);
    const jobId = await api.createJob(makeFile(), CUSTOMIZATION);
    const first = await api.getJob(jobId);
    expect(first.state).toBe("queued");
    const second = await api.getJob(jobId);
    expect(second.state).toBe("extracting");
  });

  it("raises 404 as RequestFailed with status", async () => {
    const api = new ApiClient(new MockServer().fetch);
    await expect(api.getJob("ghost")).rejects.toSatisfy(
      (err: unknown) => err instanceof RequestFailed && err.detail.status === 404,
    );
  });

  it("downloads result bytes verbatim", async () => {
    const server = new MockServer();
    const api = new ApiClient(server.fetch);
    const jobId = await api.createJob(makeFile(), CUSTOMIZATION);
    const bytes = await api.getResult(jobId, "markdown");
    expect(new TextDecoder().decode(bytes)).toBe("# Mock Book\n\nbody");
  });

  it("lists models", async () => {
    const api = new ApiClient(new MockServer().fetch);
    expect(await api.listModels()).toEqual(["stub-echo", "gpt-test"]);
  });

  it("deletes jobs", async () => {
    const server = new MockServer();
    const api = new ApiClient(server.fetch);
    const jobId = await api.createJob(makeFile(), CUSTOMIZATION);
    await api.deleteJob(jobId);
    await expect(api.getJob(jobId)).rejects.toThrowError(RequestFailed);
  });

  it("uses only documented routes", async () => {
    const server = new MockServer();
    const api = new ApiClient(server.fetch);
    const jobId = await api.createJob(makeFile(), CUSTOMIZATION);
    await api.getJob(jobId);
    await api.getResult(jobId, "markdown");
    await api.listModels();
    await api.deleteJob(jobId);
    const documented = [
      /^POST \/api\/jobs$/,
      /^GET \/api\/jobs\/[^/?]+$/,
      /^GET \/api\/jobs\/[^/?]+\/result\?format=(markdown|deck-json)$/,
      /^GET \/api\/models$/,
      /^DELETE \/api\/jobs\/[^/?]+$/,
    ];
    for (const { method, url } of server.requests) {
      expect(
        documented.some((rx) => rx.test(`${method} ${url}`)),
        `${method} ${url} must be documented`,
      ).toBe(true);
    }
  });
});
