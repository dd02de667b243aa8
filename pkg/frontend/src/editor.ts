/**
 * Query editor: a textarea with a highlight layer behind it.
 *
 * Highlighting is server-authoritative: the spans come from the parse
 * endpoint, so the editor's lexer is exactly the engine's.  Labels get
 * their stable color; the reported error span is underlined.
 */

import type { ParseFeedback } from "./api.js";
import { labelColor } from "./colors.js";
import { decorations, underlineSpan } from "./state.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function renderHighlights(text: string, feedback: ParseFeedback | null): string {
  if (feedback === null) {
    return escapeHtml(text);
  }
  const marks = decorations(text, feedback);
  const underline = underlineSpan(text.length, feedback);
  const boundaries = new Set<number>([0, text.length]);
  for (const m of marks) {
    boundaries.add(m.start);
    boundaries.add(m.end);
  }
  if (underline) {
    boundaries.add(underline.start);
    boundaries.add(underline.end);
  }
  const points = [...boundaries].sort((a, b) => a - b);
  const parts: string[] = [];
  for (let i = 0; i + 1 < points.length; i++) {
    const [from, to] = [points[i], points[i + 1]];
    if (from >= to) {
      continue;
    }
    const chunk = escapeHtml(text.slice(from, to));
    const mark = marks.find((m) => m.start <= from && to <= m.end);
    const underlined = underline && underline.start <= from && to <= underline.end;
    const classes: string[] = [];
    let style = "";
    if (mark) {
      classes.push(`tok-${mark.cls}`);
      if (mark.label !== null) {
        style = ` style="color:${labelColor(mark.label)}"`;
      }
    }
    if (underlined) {
      classes.push("tok-underline");
    }
    if (classes.length === 0) {
      parts.push(chunk);
    } else {
      parts.push(`<span class="${classes.join(" ")}"${style}>${chunk}</span>`);
    }
  }
  return parts.join("");
}

export class Editor {
  readonly textarea: HTMLTextAreaElement;
  private readonly backdrop: HTMLElement;
  private readonly status: HTMLElement;

  constructor(
    container: HTMLElement,
    private readonly onChange: (text: string) => void,
    private readonly onSubmit: () => void,
  ) {
    container.classList.add("editor");
    this.backdrop = document.createElement("pre");
    this.backdrop.className = "editor-backdrop";
    this.textarea = document.createElement("textarea");
    this.textarea.className = "editor-input";
    this.textarea.spellcheck = false;
    this.textarea.rows = 3;
    this.textarea.placeholder = "'A' isC AND NOT('A' isDF 'B')";
    container.append(this.backdrop, this.textarea);
    this.status = document.createElement("div");
    this.status.className = "editor-status";
    container.append(this.status);

    this.textarea.addEventListener("input", () => {
      this.sync(null);
      this.onChange(this.textarea.value);
    });
    this.textarea.addEventListener("scroll", () => {
      this.backdrop.scrollLeft = this.textarea.scrollLeft;
      this.backdrop.scrollTop = this.textarea.scrollTop;
    });
    this.textarea.addEventListener("keydown", (ev) => {
      if (ev.key === "Enter" && (ev.ctrlKey || ev.metaKey)) {
        ev.preventDefault();
        this.onSubmit();
      }
    });
  }

  get text(): string {
    return this.textarea.value;
  }

  sync(feedback: ParseFeedback | null): void {
    this.backdrop.innerHTML = renderHighlights(this.textarea.value, feedback) + "\n";
    if (feedback === null || this.textarea.value === "") {
      this.status.textContent = "";
      return;
    }
    if (feedback.ok) {
      this.status.textContent = `ok · ${feedback.leaves} leaves`;
      this.status.className = "editor-status ok";
    } else if (feedback.error) {
      this.status.textContent =
        `${feedback.error.message} (line ${feedback.error.line}, ` +
        `column ${feedback.error.column})`;
      this.status.className = "editor-status bad";
    }
  }
}
