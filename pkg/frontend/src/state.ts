/**
 * Console state and the pure derivations the views render from.
 *
 * Counts shown anywhere come verbatim from service responses; nothing is
 * recomputed on the client.
 */

import type { ParseFeedback, QueryResponse, SessionLog, TokenSpan } from "./api.js";

export interface ConsoleState {
  activeLog: SessionLog | null;
  editorText: string;
  parseFeedback: ParseFeedback | null;
  lastResult: QueryResponse | null;
  selectedVariant: string | null;
  banner: string | null;
}

export function initialState(): ConsoleState {
  return {
    activeLog: null,
    editorText: "",
    parseFeedback: null,
    lastResult: null,
    selectedVariant: null,
    banner: null,
  };
}

export function withResult(state: ConsoleState, result: QueryResponse): ConsoleState {
  const keys = new Set(result.matched_variants.map((v) => v.key));
  const selected =
    state.selectedVariant !== null && keys.has(state.selectedVariant)
      ? state.selectedVariant
      : null;
  return { ...state, lastResult: result, selectedVariant: selected, banner: null };
}

export function selectVariant(state: ConsoleState, key: string): ConsoleState {
  const known = state.lastResult?.matched_variants.some((v) => v.key === key);
  if (!known) {
    return state;
  }
  return { ...state, selectedVariant: key };
}

export function withLog(state: ConsoleState, log: SessionLog): ConsoleState {
  // Switching logs keeps the editor text but drops stale results.
  return {
    ...state,
    activeLog: log,
    lastResult: null,
    selectedVariant: null,
    banner: null,
  };
}

/** The headline "matched/total" figures, straight from the response. */
export function countsLine(result: QueryResponse): string {
  return (
    `${result.matched_variant_count}/${result.variant_count} variants · ` +
    `${result.matched_trace_count}/${result.trace_count} traces`
  );
}

export function logHeadline(log: SessionLog): string {
  return `${log.name}: ${log.trace_count} traces, ${log.variant_count} variants`;
}

export interface Underline {
  start: number;
  end: number;
  message: string;
}

/**
 * Where to draw the error underline: the token containing the reported
 * offset when there is one, otherwise from the offset to the end of the
 * text (an unterminated label already arrives as an error token spanning
 * the rest of the input).
 */
export function underlineSpan(
  textLength: number,
  feedback: ParseFeedback,
): Underline | null {
  if (feedback.ok || !feedback.error) {
    return null;
  }
  const offset = feedback.error.offset;
  const token = feedback.tokens.find((t) => t.start <= offset && offset < t.end);
  if (token) {
    return { start: token.start, end: token.end, message: feedback.error.message };
  }
  if (offset >= textLength) {
    const start = Math.max(0, textLength - 1);
    return { start, end: textLength, message: feedback.error.message };
  }
  return { start: offset, end: textLength, message: feedback.error.message };
}

export interface Decoration {
  start: number;
  end: number;
  cls: string;
  label: string | null;
}

/** Unquote a label token's text ('' is an escaped quote). */
function tokenLabel(text: string, span: TokenSpan): string | null {
  const raw = text.slice(span.start, span.end);
  if (!raw.startsWith("'")) {
    return null;
  }
  const inner = raw.endsWith("'") ? raw.slice(1, -1) : raw.slice(1);
  return inner.replace(/''/g, "'");
}

/** Editor decorations from server-reported token spans. */
export function decorations(text: string, feedback: ParseFeedback): Decoration[] {
  return feedback.tokens.map((span) => ({
    start: span.start,
    end: span.end,
    cls: span.class,
    label: span.class === "label" ? tokenLabel(text, span) : null,
  }));
}
