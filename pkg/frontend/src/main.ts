/**
 * Console wiring: upload a log, type a query with live feedback, run it,
 * inspect matching variants, refine, repeat.
 *
 * At most one query request is in flight; a newer submission aborts the
 * older one.  Parse feedback is debounced while typing.
 */

import { ApiError, Client } from "./api.js";
import { labelColor } from "./colors.js";
import { Editor } from "./editor.js";
import {
  ConsoleState,
  countsLine,
  initialState,
  logHeadline,
  selectVariant,
  withLog,
  withResult,
} from "./state.js";
import { VariantList } from "./variants.js";

const PARSE_DEBOUNCE_MS = 250;

class Console {
  private state: ConsoleState = initialState();
  private readonly client = new Client("");
  private parseTimer: number | undefined;
  private parseAbort: AbortController | null = null;
  private queryAbort: AbortController | null = null;

  private readonly editor: Editor;
  private readonly variantList: VariantList;
  private readonly header = document.getElementById("log-header")!;
  private readonly labelTable = document.getElementById("label-table")!;
  private readonly counts = document.getElementById("counts")!;
  private readonly banner = document.getElementById("banner")!;
  private readonly runButton = document.getElementById("run") as HTMLButtonElement;
  private readonly fileInput = document.getElementById("file") as HTMLInputElement;

  constructor() {
    this.editor = new Editor(
      document.getElementById("editor")!,
      (text) => this.onEdit(text),
      () => this.runQuery(),
    );
    this.variantList = new VariantList(
      document.getElementById("variants")!,
      (key) => {
        this.state = selectVariant(this.state, key);
        this.renderResult();
      },
    );
    this.runButton.addEventListener("click", () => this.runQuery());
    this.fileInput.addEventListener("change", () => {
      const file = this.fileInput.files?.[0];
      if (file) {
        void this.uploadLog(file);
      }
    });
    this.render();
  }

  private onEdit(text: string): void {
    this.state = { ...this.state, editorText: text };
    window.clearTimeout(this.parseTimer);
    if (text.trim() === "") {
      this.state = { ...this.state, parseFeedback: null };
      this.editor.sync(null);
      return;
    }
    this.parseTimer = window.setTimeout(() => void this.refreshParse(text), PARSE_DEBOUNCE_MS);
  }

  private async refreshParse(text: string): Promise<void> {
    this.parseAbort?.abort();
    this.parseAbort = new AbortController();
    try {
      const feedback = await this.client.parseQuery(text, this.parseAbort.signal);
      if (text !== this.editor.text) {
        return; // stale response
      }
      this.state = { ...this.state, parseFeedback: feedback, banner: null };
      this.editor.sync(feedback);
    } catch (err) {
      if ((err as Error).name !== "AbortError") {
        this.showBanner("service unreachable; feedback paused");
      }
    }
  }

  private async uploadLog(file: File): Promise<void> {
    try {
      const log = await this.client.uploadLog(file);
      this.state = withLog(this.state, log);
      this.render();
    } catch (err) {
      if (err instanceof ApiError) {
        this.showBanner(`upload failed: ${err.message}`);
      } else {
        this.showBanner("service unreachable");
      }
    }
  }

  private async runQuery(): Promise<void> {
    const log = this.state.activeLog;
    if (!log || this.editor.text.trim() === "") {
      return;
    }
    this.queryAbort?.abort();
    this.queryAbort = new AbortController();
    this.runButton.disabled = true;
    try {
      const result = await this.client.runQuery(
        log.log_id,
        this.editor.text,
        this.queryAbort.signal,
      );
      this.state = withResult(this.state, result);
      this.renderResult();
    } catch (err) {
      if ((err as Error).name === "AbortError") {
        return;
      }
      // Keep the previous results; surface the error inline.
      if (err instanceof ApiError && err.body?.error?.position) {
        const position = err.body.error.position;
        this.state = {
          ...this.state,
          parseFeedback: {
            ok: false,
            error: position,
            tokens: this.state.parseFeedback?.tokens ?? [],
          },
        };
        this.editor.sync(this.state.parseFeedback);
      } else if (err instanceof ApiError) {
        this.showBanner(`query failed: ${err.message}`);
      } else {
        this.showBanner("service unreachable");
      }
    } finally {
      this.runButton.disabled = false;
    }
  }

  private showBanner(message: string): void {
    this.state = { ...this.state, banner: message };
    this.banner.textContent = message;
    this.banner.classList.remove("hidden");
    window.setTimeout(() => this.banner.classList.add("hidden"), 4000);
  }

  private render(): void {
    const log = this.state.activeLog;
    this.header.textContent = log ? logHeadline(log) : "no log loaded";
    this.labelTable.replaceChildren();
    if (log) {
      for (const { label, count } of log.labels) {
        const row = document.createElement("tr");
        const swatch = document.createElement("td");
        swatch.textContent = label;
        swatch.style.color = labelColor(label);
        const n = document.createElement("td");
        n.textContent = String(count);
        row.append(swatch, n);
        this.labelTable.append(row);
      }
    }
    this.renderResult();
  }

  private renderResult(): void {
    const result = this.state.lastResult;
    this.counts.textContent = result ? countsLine(result) : "";
    this.variantList.render(result, this.state.selectedVariant);
  }
}

new Console();
