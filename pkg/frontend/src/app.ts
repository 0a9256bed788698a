/** Page assembly: sentence list, editor with live feedback, certainty
 * radios, and the shared comment thread. Keyboard-first: Ctrl+Enter
 * saves, Alt+1/2/3 set certainty, Tab order follows the annotate-save
 * loop. */

import { Annotation, ApiClient, StaleWriteError, debounce } from "./api.js";
import {
  applySuggestion, renderDiagnostics, renderHighlights, typeBadge,
} from "./editor.js";

const DEBOUNCE_MS = 300;

export function mount(root: HTMLElement, api: ApiClient, author: string): void {
  root.innerHTML = `
    <div class="layout">
      <aside><ul id="sentences" tabindex="0"></ul></aside>
      <main>
        <h2 id="sentence-text">Select a sentence</h2>
        <div class="editor-stack">
          <pre id="overlay" aria-hidden="true"></pre>
          <textarea id="editor" spellcheck="false"
                    aria-label="annotation editor"></textarea>
        </div>
        <div id="type-badge" class="badge neutral">—</div>
        <div id="offline-banner" hidden>service unreachable; edits kept locally</div>
        <ul id="diagnostics"></ul>
        <fieldset id="certainty">
          <legend>Certainty</legend>
          <label><input type="radio" name="certainty" value="certain"> certain</label>
          <label><input type="radio" name="certainty" value="uncertain"> uncertain</label>
          <label><input type="radio" name="certainty" value="incomplete" checked> incomplete</label>
        </fieldset>
        <button id="save">Save (Ctrl+Enter)</button>
        <section>
          <h3>Comments</h3>
          <ul id="comments"></ul>
          <textarea id="new-comment" aria-label="new comment"></textarea>
          <button id="add-comment">Add comment</button>
        </section>
      </main>
    </div>`;

  const editor = root.querySelector<HTMLTextAreaElement>("#editor")!;
  const overlay = root.querySelector<HTMLPreElement>("#overlay")!;
  const badge = root.querySelector<HTMLDivElement>("#type-badge")!;
  const banner = root.querySelector<HTMLDivElement>("#offline-banner")!;
  const diagList = root.querySelector<HTMLUListElement>("#diagnostics")!;
  const commentList = root.querySelector<HTMLUListElement>("#comments")!;

  let current: Annotation | null = null;

  function refreshOverlay(): void {
    overlay.innerHTML = renderHighlights(editor.value, editor.selectionStart);
  }

  async function liveCheck(): Promise<void> {
    const text = editor.value;
    let result = null;
    try {
      result = await api.check(text);
      banner.hidden = true;
    } catch {
      banner.hidden = false; // editor stays usable offline
    }
    const b = typeBadge(result, text);
    badge.className = `badge ${b.state}`;
    badge.textContent = b.label;
    diagList.innerHTML = "";
    if (result === null) return;
    for (const view of renderDiagnostics(text, result)) {
      const li = document.createElement("li");
      li.className = `diag ${view.severity}`;
      li.textContent = `${view.severity} ${view.code} (${view.location}): ${view.message}`;
      if (view.suggestion) {
        const btn = document.createElement("button");
        btn.textContent = `apply: ${view.suggestion}`;
        btn.addEventListener("click", () => {
          const fixed = applySuggestion(view);
          if (fixed !== null) {
            editor.value = fixed;
            refreshOverlay();
            void liveCheck();
          }
        });
        li.appendChild(btn);
      }
      diagList.appendChild(li);
    }
  }

  const debouncedCheck = debounce(() => void liveCheck(), DEBOUNCE_MS);

  editor.addEventListener("input", () => {
    refreshOverlay();
    debouncedCheck();
  });
  editor.addEventListener("keyup", refreshOverlay);
  editor.addEventListener("click", refreshOverlay);

  function certainty(): Annotation["certainty"] {
    const checked = root.querySelector<HTMLInputElement>(
      "input[name=certainty]:checked");
    return (checked?.value ?? "incomplete") as Annotation["certainty"];
  }

  function setCertainty(value: string): void {
    const input = root.querySelector<HTMLInputElement>(
      `input[name=certainty][value=${value}]`);
    if (input) input.checked = true;
  }

  function renderComments(): void {
    commentList.innerHTML = "";
    for (const c of current?.comments ?? []) {
      const li = document.createElement("li");
      li.textContent = `${c.author} @ ${c.timestamp}: ${c.text}`;
      commentList.appendChild(li);
    }
  }

  async function load(id: string): Promise<void> {
    current = await api.annotation(id);
    editor.value = current.ulf;
    setCertainty(current.certainty);
    renderComments();
    refreshOverlay();
    void liveCheck();
  }

  async function save(extraComment?: string): Promise<void> {
    if (!current) return;
    const comments = [...current.comments];
    if (extraComment && extraComment.trim()) {
      comments.push({ author, timestamp: "", text: extraComment.trim() });
    }
    try {
      current = await api.save(current.sentenceId, {
        ulf: editor.value,
        certainty: certainty(),
        author,
        comments,
        baseVersion: current.version,
      });
      renderComments();
    } catch (e) {
      if (e instanceof StaleWriteError) {
        const reload = window.confirm(
          `Someone saved version ${e.detail.currentVersion} while you edited. ` +
          `Reload their version? (Cancel keeps yours; save again to overwrite.)`);
        if (reload) {
          await load(current.sentenceId);
        } else {
          current.version = e.detail.currentVersion;
        }
        return;
      }
      throw e;
    }
  }

  root.querySelector("#save")!.addEventListener("click", () => void save());
  root.querySelector("#add-comment")!.addEventListener("click", () => {
    const box = root.querySelector<HTMLTextAreaElement>("#new-comment")!;
    void save(box.value).then(() => { box.value = ""; });
  });
  root.addEventListener("keydown", (e) => {
    const ev = e as KeyboardEvent;
    if (ev.ctrlKey && ev.key === "Enter") void save();
    if (ev.altKey && ["1", "2", "3"].includes(ev.key)) {
      setCertainty(["certain", "uncertain", "incomplete"][Number(ev.key) - 1]);
      ev.preventDefault();
    }
  });

  void api.sentences().then((sentences) => {
    const ul = root.querySelector<HTMLUListElement>("#sentences")!;
    for (const s of sentences) {
      const li = document.createElement("li");
      const btn = document.createElement("button");
      btn.textContent = `${s.annotated ? "✓ " : ""}${s.sentenceId}: ${s.sentence}`;
      btn.addEventListener("click", () => {
        root.querySelector("#sentence-text")!.textContent = s.sentence;
        void load(s.sentenceId);
      });
      li.appendChild(btn);
      ul.appendChild(li);
    }
  });
}

declare global {
  interface Window { ULF_SERVICE_BASE?: string; }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const base = window.ULF_SERVICE_BASE ?? "http://127.0.0.1:8000";
  const author = new URLSearchParams(location.search).get("author") ?? "anon";
  mount(document.getElementById("app")!, new ApiClient(base), author);
}
