// Job cards: one card per upload, with live progress, preview, download.

import { ApiClient } from "./api.js";
import { renderMarkdown } from "./markdown.js";
import { JobPoller, UiJobView } from "./poller.js";
import { JobIdStore } from "./store.js";

const STAGE_LABELS: Record<string, string> = {
  queued: "Queued",
  extracting: "Extracting slides",
  planning: "Planning chapters",
  generating: "Writing chapters",
  assembling: "Assembling book",
  done: "Done",
  failed: "Failed",
  expired: "Expired",
};

export function triggerDownload(bytes: Uint8Array, filename: string, doc: Document): void {
  const blob = new Blob([bytes.buffer as ArrayBuffer], { type: "text/markdown" });
  const url = URL.createObjectURL(blob);
  const anchor = doc.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  doc.body.appendChild(anchor);
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
}

export class JobCard {
  readonly root: HTMLElement;
  private readonly bar: HTMLElement;
  private readonly stageLabel: HTMLElement;
  private readonly chapterLabel: HTMLElement;
  private readonly errorBox: HTMLElement;
  private readonly previewButton: HTMLButtonElement;
  private readonly downloadButton: HTMLButtonElement;
  private readonly previewPane: HTMLElement;
  private poller: JobPoller | null = null;
  private lastRendered = -1;

  constructor(
    private readonly api: ApiClient,
    private readonly store: JobIdStore,
    readonly jobId: string,
    readonly fileName: string,
    private readonly doc: Document,
  ) {
    this.root = doc.createElement("article");
    this.root.className = "job-card";
    this.root.dataset.jobId = jobId;
    this.root.innerHTML = `
      <header>
        <span class="file-name"></span>
        <span class="stage" data-role="stage">Queued</span>
      </header>
      <div class="bar-track"><div class="bar" data-role="bar" style="width:0%"></div></div>
      <div class="chapter" data-role="chapter"></div>
      <div class="error" data-role="error" hidden></div>
      <div class="actions">
        <button type="button" data-role="preview" disabled>Preview</button>
        <button type="button" data-role="download" disabled>Download .md</button>
        <button type="button" data-role="dismiss">Dismiss</button>
      </div>
      <section class="preview-pane" data-role="preview-pane" hidden></section>
    `;
    (this.root.querySelector(".file-name") as HTMLElement).textContent = fileName;
    this.bar = this.root.querySelector('[data-role="bar"]') as HTMLElement;
    this.stageLabel = this.root.querySelector('[data-role="stage"]') as HTMLElement;
    this.chapterLabel = this.root.querySelector('[data-role="chapter"]') as HTMLElement;
    this.errorBox = this.root.querySelector('[data-role="error"]') as HTMLElement;
    this.previewButton = this.root.querySelector('[data-role="preview"]') as HTMLButtonElement;
    this.downloadButton = this.root.querySelector('[data-role="download"]') as HTMLButtonElement;
    this.previewPane = this.root.querySelector('[data-role="preview-pane"]') as HTMLElement;

    this.previewButton.addEventListener("click", () => void this.showPreview());
    this.downloadButton.addEventListener("click", () => void this.download());
    (this.root.querySelector('[data-role="dismiss"]') as HTMLButtonElement).addEventListener(
      "click",
      () => this.dismiss(),
    );
  }

  render(view: UiJobView): void {
    // progress never moves backwards between renders
    const progress = Math.max(this.lastRendered, view.progress);
    this.lastRendered = progress;
    this.bar.style.width = `${progress}%`;
    this.bar.classList.toggle("failed", view.state === "failed" || view.state === "expired");
    this.stageLabel.textContent = STAGE_LABELS[view.state] ?? view.state;
    this.chapterLabel.textContent =
      view.state === "generating" && view.chapterTotal > 0
        ? `chapter ${view.chapterCurrent} of ${view.chapterTotal}`
        : "";
    if (view.error) {
      this.errorBox.textContent = view.error;
      this.errorBox.hidden = false;
    }
    const ready = view.state === "done";
    this.previewButton.disabled = !ready;
    this.downloadButton.disabled = !ready;
    this.root.dataset.state = view.state;
  }

  showError(message: string): void {
    this.errorBox.textContent = message;
    this.errorBox.hidden = false;
    this.stageLabel.textContent = "Failed";
    this.root.dataset.state = "failed";
  }

  /** Polls every second until terminal; resolves with the final view. */
  async track(intervalMs = 1000, sleep?: (ms: number) => Promise<void>): Promise<UiJobView> {
    this.poller = new JobPoller(this.api, this.jobId, (view) => this.render(view),
                                intervalMs, sleep);
    return this.poller.run();
  }

  stopTracking(): void {
    this.poller?.stop();
  }

  async showPreview(): Promise<void> {
    const bytes = await this.api.getResult(this.jobId, "markdown");
    const text = new TextDecoder().decode(bytes);
    this.previewPane.innerHTML = renderMarkdown(text);
    this.previewPane.hidden = false;
  }

  async download(): Promise<void> {
    const bytes = await this.api.getResult(this.jobId, "markdown");
    const base = this.fileName.replace(/\.pptx?$/i, "") || "textbook";
    triggerDownload(bytes, `${base}.md`, this.doc);
  }

  dismiss(): void {
    this.stopTracking();
    this.store.remove(this.jobId);
    this.root.remove();
  }
}
