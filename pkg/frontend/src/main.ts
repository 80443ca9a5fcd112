// Page wiring: drag-and-drop uploads, the customization form, job cards.

import { ApiClient, RequestFailed } from "./api.js";
import { JobCard } from "./cards.js";
import { canSubmit, DEFAULT_FORM, DIFFICULTIES, FormState, LANGUAGES, STYLES, toPayload } from "./form.js";
import { JobIdStore } from "./store.js";
import { viewFrom } from "./poller.js";

export interface AppDeps {
  doc: Document;
  api: ApiClient;
  store: JobIdStore;
  pollIntervalMs?: number;
  sleep?: (ms: number) => Promise<void>;
}

export class App {
  readonly cards = new Map<string, JobCard>();
  private form: FormState = { ...DEFAULT_FORM };
  private pendingFiles: File[] = [];

  constructor(private readonly deps: AppDeps) {}

  get doc(): Document {
    return this.deps.doc;
  }

  async start(): Promise<void> {
    this.buildForm();
    this.bindDropZone();
    await this.populateModels();
    await this.restoreKnownJobs();
  }

  private buildForm(): void {
    const doc = this.doc;
    const select = (id: string, options: string[], value: string) => {
      const el = doc.getElementById(id) as HTMLSelectElement;
      el.innerHTML = "";
      for (const option of options) {
        const node = doc.createElement("option");
        node.value = option;
        node.textContent = option;
        el.appendChild(node);
      }
      el.value = value;
      return el;
    };
    const language = doc.getElementById("language") as HTMLSelectElement;
    language.innerHTML = "";
    for (const { tag, label } of LANGUAGES) {
      const node = doc.createElement("option");
      node.value = tag;
      node.textContent = `${label} (${tag})`;
      language.appendChild(node);
    }
    language.value = this.form.language;
    language.addEventListener("change", () => {
      this.form.language = language.value;
      this.refreshSubmit();
    });

    const style = select("style", STYLES, this.form.style);
    style.addEventListener("change", () => {
      this.form.style = style.value;
      this.refreshSubmit();
    });
    const difficulty = select("difficulty", DIFFICULTIES, this.form.difficulty);
    difficulty.addEventListener("change", () => {
      this.form.difficulty = difficulty.value;
      this.refreshSubmit();
    });

    const objectives = doc.getElementById("objectives") as HTMLTextAreaElement;
    objectives.addEventListener("input", () => {
      this.form.objectivesText = objectives.value;
    });
    const exercises = doc.getElementById("exercises") as HTMLInputElement;
    exercises.checked = this.form.includeExercises;
    exercises.addEventListener("change", () => {
      this.form.includeExercises = exercises.checked;
    });

    const fileInput = doc.getElementById("file-input") as HTMLInputElement;
    fileInput.addEventListener("change", () => {
      this.setPendingFiles(Array.from(fileInput.files ?? []));
    });

    (doc.getElementById("upload-form") as HTMLFormElement).addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });
    this.refreshSubmit();
  }

  private async populateModels(): Promise<void> {
    const modelSelect = this.doc.getElementById("model") as HTMLSelectElement;
    let models: string[] = [];
    try {
      models = await this.deps.api.listModels();
    } catch {
      models = [];
    }
    modelSelect.innerHTML = "";
    for (const id of models) {
      const node = this.doc.createElement("option");
      node.value = id;
      node.textContent = id;
      modelSelect.appendChild(node);
    }
    this.form.modelId = models[0] ?? "";
    modelSelect.value = this.form.modelId;
    modelSelect.addEventListener("change", () => {
      this.form.modelId = modelSelect.value;
      this.refreshSubmit();
    });
    this.refreshSubmit();
  }

  private bindDropZone(): void {
    const zone = this.doc.getElementById("drop-zone") as HTMLElement;
    const stop = (event: Event) => {
      event.preventDefault();
      event.stopPropagation();
    };
    for (const name of ["dragenter", "dragover", "dragleave", "drop"]) {
      zone.addEventListener(name, stop);
    }
    zone.addEventListener("dragover", () => zone.classList.add("hover"));
    zone.addEventListener("dragleave", () => zone.classList.remove("hover"));
    zone.addEventListener("drop", (event) => {
      zone.classList.remove("hover");
      const files = Array.from((event as DragEvent).dataTransfer?.files ?? []);
      this.setPendingFiles(files);
      void this.submit();
    });
  }

  setPendingFiles(files: File[]): void {
    this.pendingFiles = files;
    const label = this.doc.getElementById("file-label");
    if (label) {
      label.textContent = files.length
        ? files.map((f) => f.name).join(", ")
        : "no files selected";
    }
    this.refreshSubmit();
  }

  refreshSubmit(): void {
    const button = this.doc.getElementById("submit") as HTMLButtonElement | null;
    if (button) button.disabled = !canSubmit(this.form, this.pendingFiles.length);
  }

  /** Uploads every pending file; each gets its own card and polling loop. */
  async submit(): Promise<void> {
    const files = this.pendingFiles;
    this.setPendingFiles([]);
    await Promise.all(files.map((file) => this.uploadOne(file)));
  }

  async uploadOne(file: File): Promise<void> {
    const container = this.doc.getElementById("cards") as HTMLElement;
    try {
      const jobId = await this.deps.api.createJob(file, toPayload(this.form));
      this.deps.store.add(jobId);
      const card = new JobCard(this.deps.api, this.deps.store, jobId, file.name, this.doc);
      this.cards.set(jobId, card);
      container.prepend(card.root);
      card.render({
        jobId, state: "queued", progress: 0, chapterCurrent: 0, chapterTotal: 0, error: null,
      });
      void card.track(this.deps.pollIntervalMs ?? 1000, this.deps.sleep).catch((err) => {
        card.showError(err instanceof Error ? err.message : String(err));
      });
    } catch (err) {
      // surfaced inline: a rejected upload still produces a (failed) card
      const card = new JobCard(this.deps.api, this.deps.store, `rejected-${Date.now()}`,
                               file.name, this.doc);
      this.cards.set(card.jobId, card);
      container.prepend(card.root);
      const message = err instanceof RequestFailed
        ? err.detail.message
        : `network failure: ${err instanceof Error ? err.message : String(err)} (try again)`;
      card.showError(message);
    }
  }

  /** A refresh rebuilds every card from the server for the stored ids. */
  async restoreKnownJobs(): Promise<void> {
    const container = this.doc.getElementById("cards") as HTMLElement;
    for (const jobId of this.deps.store.list()) {
      let fileName = jobId.slice(0, 8);
      try {
        const snapshot = await this.deps.api.getJob(jobId);
        const card = new JobCard(this.deps.api, this.deps.store, jobId, fileName, this.doc);
        this.cards.set(jobId, card);
        container.appendChild(card.root);
        card.render(viewFrom(jobId, snapshot, 0));
        if (!["done", "failed"].includes(snapshot.state)) {
          void card.track(this.deps.pollIntervalMs ?? 1000, this.deps.sleep).catch(() => {});
        }
      } catch (err) {
        if (err instanceof RequestFailed && err.detail.status === 404) {
          this.deps.store.remove(jobId); // cleaned up server-side
        }
      }
    }
  }
}

export function boot(): void {
  const app = new App({ doc: document, api: new ApiClient(), store: new JobIdStore() });
  void app.start();
}
