/** Typed client for the annotation service. All semantic judgments come
 * from these endpoints; the editor only adds bracket highlighting. */

export interface DiagnosticRecord {
  path: number[];
  severity: "error" | "warning" | "note";
  code: string;
  message: string;
  suggestion: string | null;
  offset: number | null;
}

export interface CheckResult {
  type: string | null;
  diagnostics: DiagnosticRecord[];
}

export interface SentenceInfo {
  sentenceId: string;
  dataset: string;
  sentence: string;
  annotated: boolean;
}

export interface CommentRecord {
  author: string;
  timestamp: string;
  text: string;
}

export interface Annotation {
  sentenceId: string;
  ulf: string;
  certainty: "certain" | "uncertain" | "incomplete";
  comments: CommentRecord[];
  version: number;
  author?: string;
}

export interface StaleWriteDetail {
  code: "StaleWrite";
  message: string;
  currentVersion: number;
}

export class StaleWriteError extends Error {
  constructor(public detail: StaleWriteDetail) {
    super(detail.message);
  }
}

export class ApiClient {
  constructor(private base: string, private fetchFn: typeof fetch = fetch) {}

  private async get<T>(path: string): Promise<T> {
    const res = await this.fetchFn(this.base + path);
    if (!res.ok) throw new Error(`${path}: ${res.status}`);
    return res.json() as Promise<T>;
  }

  sentences(dataset?: string): Promise<SentenceInfo[]> {
    const q = dataset ? `?dataset=${encodeURIComponent(dataset)}` : "";
    return this.get(`/sentences${q}`);
  }

  annotation(id: string): Promise<Annotation> {
    return this.get(`/annotation/${encodeURIComponent(id)}`);
  }

  async check(ulf: string, fragment = true): Promise<CheckResult> {
    const res = await this.fetchFn(this.base + "/check", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ ulf, fragment }),
    });
    if (!res.ok) throw new Error(`/check: ${res.status}`);
    return res.json() as Promise<CheckResult>;
  }

  async save(
    id: string,
    body: {
      ulf: string;
      certainty: Annotation["certainty"];
      author: string;
      comments?: CommentRecord[];
      baseVersion?: number;
    },
  ): Promise<Annotation> {
    const res = await this.fetchFn(
      this.base + `/annotation/${encodeURIComponent(id)}`,
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      },
    );
    if (res.status === 409) {
      const payload = (await res.json()) as { detail: StaleWriteDetail };
      throw new StaleWriteError(payload.detail);
    }
    if (!res.ok) throw new Error(`PUT /annotation: ${res.status}`);
    return res.json() as Promise<Annotation>;
  }
}

/** Trailing-edge debounce used for live checking while typing. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  ms: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => fn(...args), ms);
  };
}
