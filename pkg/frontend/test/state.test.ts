import { describe, expect, it } from "vitest";

import type { ParseFeedback, QueryResponse, SessionLog } from "../src/api";
import {
  countsLine,
  decorations,
  initialState,
  logHeadline,
  selectVariant,
  underlineSpan,
  withLog,
  withResult,
} from "../src/state";

import parseError from "./fixtures/parse_error.json";
import parseOk from "./fixtures/parse_ok.json";
import queryResponse from "./fixtures/query_response.json";
import sessionLog from "./fixtures/session_log.json";
import inputs from "./fixtures/inputs.json";

const result = queryResponse as QueryResponse;
const log = sessionLog as SessionLog;

describe("displayed counts", () => {
  it("echo the service response verbatim", () => {
    expect(countsLine(result)).toBe(
      `${result.matched_variant_count}/${result.variant_count} variants · ` +
        `${result.matched_trace_count}/${result.trace_count} traces`,
    );
    expect(countsLine(result)).toBe("1/2 variants · 1/2 traces");
  });

  it("shows the upload header from the session payload", () => {
    expect(logHeadline(log)).toBe("credit.csv: 2 traces, 2 variants");
  });
});

describe("error underline", () => {
  it("covers the token at the service-reported offset", () => {
    const feedback = parseError as ParseFeedback;
    const text = (inputs as { broken_query: string }).broken_query;
    const span = underlineSpan(text.length, feedback);
    expect(feedback.error!.offset).toBe(4);
    expect(span).not.toBeNull();
    expect(span!.start).toBe(4);
    expect(span!.end).toBe(7);
    expect(text.slice(span!.start, span!.end)).toBe("isQ");
  });

  it("runs to the end of the input for an unterminated label", () => {
    const feedback: ParseFeedback = {
      ok: false,
      error: { offset: 12, line: 1, column: 13, message: "unterminated label" },
      tokens: [
        { start: 0, end: 3, class: "label" },
        { start: 4, end: 7, class: "keyword" },
        { start: 8, end: 11, class: "keyword" },
        { start: 12, end: 14, class: "error" },
      ],
    };
    const span = underlineSpan(14, feedback);
    expect(span).toEqual({ start: 12, end: 14, message: "unterminated label" });
  });

  it("falls back to a trailing underline when the offset is at the end", () => {
    const feedback: ParseFeedback = {
      ok: false,
      error: { offset: 8, line: 1, column: 9, message: "expected a label" },
      tokens: [
        { start: 0, end: 3, class: "label" },
        { start: 4, end: 8, class: "keyword" },
      ],
    };
    const span = underlineSpan(8, feedback);
    expect(span).toEqual({ start: 7, end: 8, message: "expected a label" });
  });

  it("is absent for clean parses", () => {
    expect(underlineSpan(100, parseOk as ParseFeedback)).toBeNull();
  });
});

describe("editor decorations", () => {
  it("extracts label text so colors match the variant explorer", () => {
    const text = (inputs as { query: string }).query;
    const marks = decorations(text, parseOk as ParseFeedback);
    const labels = marks.filter((m) => m.cls === "label").map((m) => m.label);
    expect(labels).toEqual(["DC", "DC", "CRR", "DC", "DC", "DM"]);
  });

  it("unescapes doubled quotes inside labels", () => {
    const text = "'it''s' isC";
    const feedback: ParseFeedback = {
      ok: true,
      leaves: 1,
      tokens: [
        { start: 0, end: 7, class: "label" },
        { start: 8, end: 11, class: "keyword" },
      ],
    };
    expect(decorations(text, feedback)[0].label).toBe("it's");
  });
});

describe("state transitions", () => {
  it("keeps the selected variant only while it exists in the result", () => {
    let state = withResult(initialState(), result);
    const key = result.matched_variants[0].key;
    state = selectVariant(state, key);
    expect(state.selectedVariant).toBe(key);

    state = selectVariant(state, "no-such-key");
    expect(state.selectedVariant).toBe(key);

    const empty: QueryResponse = { ...result, matched_variants: [] };
    state = withResult(state, empty);
    expect(state.selectedVariant).toBeNull();
  });

  it("switching logs keeps the editor text but clears results", () => {
    let state = withResult(
      { ...initialState(), editorText: "'A' isC" },
      result,
    );
    state = withLog(state, log);
    expect(state.editorText).toBe("'A' isC");
    expect(state.lastResult).toBeNull();
    expect(state.activeLog).toBe(log);
  });
});
