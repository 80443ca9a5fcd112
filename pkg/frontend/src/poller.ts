// Polls one job every second until it reaches a terminal state.
// Rendered progress never decreases; a 404 mid-poll marks the job expired.

import { ApiClient, JobSnapshot, RequestFailed } from "./api.js";

export interface UiJobView {
  jobId: string;
  state: string; // server states plus "expired" after a 404
  progress: number;
  chapterCurrent: number;
  chapterTotal: number;
  error: string | null;
}

export const TERMINAL_UI_STATES = new Set(["done", "failed", "expired"]);

export const POLL_INTERVAL_MS = 1000;

type Sleep = (ms: number) => Promise<void>;

const realSleep: Sleep = (ms) => new Promise((resolve) => setTimeout(resolve, ms));

export function viewFrom(jobId: string, snapshot: JobSnapshot, floorProgress: number): UiJobView {
  return {
    jobId,
    state: snapshot.state,
    progress: Math.max(floorProgress, snapshot.progress),
    chapterCurrent: snapshot.chapter_progress?.[0] ?? 0,
    chapterTotal: snapshot.chapter_progress?.[1] ?? 0,
    error: snapshot.error,
  };
}

export class JobPoller {
  private stopped = false;
  private lastProgress = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly jobId: string,
    private readonly onUpdate: (view: UiJobView) => void,
    private readonly intervalMs: number = POLL_INTERVAL_MS,
    private readonly sleep: Sleep = realSleep,
  ) {}

  stop(): void {
    this.stopped = true;
  }

  /** Resolves with the final view once the job is terminal (or expired). */
  async run(): Promise<UiJobView> {
    for (;;) {
      let view: UiJobView;
      try {
        const snapshot = await this.api.getJob(this.jobId);
        view = viewFrom(this.jobId, snapshot, this.lastProgress);
        this.lastProgress = view.progress;
      } catch (err) {
        if (err instanceof RequestFailed && err.detail.status === 404) {
          view = {
            jobId: this.jobId,
            state: "expired",
            progress: this.lastProgress,
            chapterCurrent: 0,
            chapterTotal: 0,
            error: "job no longer exists on the server",
          };
        } else {
          throw err;
        }
      }
      this.onUpdate(view);
      if (this.stopped || TERMINAL_UI_STATES.has(view.state)) {
        return view;
      }
      await this.sleep(this.intervalMs);
    }
  }
}
