// Known job ids survive reloads in localStorage; a refresh rebuilds every
// card from the server, so no client state can contradict it.

const KEY = "slideforge.jobs";

interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export class JobIdStore {
  constructor(private readonly storage: StorageLike = localStorage) {}

  list(): string[] {
    try {
      const raw = this.storage.getItem(KEY);
      const ids = raw ? JSON.parse(raw) : [];
      return Array.isArray(ids) ? ids.filter((x) => typeof x === "string") : [];
    } catch {
      return [];
    }
  }

  add(jobId: string): void {
    const ids = this.list();
    if (!ids.includes(jobId)) {
      ids.push(jobId);
      this.storage.setItem(KEY, JSON.stringify(ids));
    }
  }

  remove(jobId: string): void {
    const ids = this.list().filter((x) => x !== jobId);
    this.storage.setItem(KEY, JSON.stringify(ids));
  }
}
