import { describe, expect, it } from "vitest";

import type { Segment, SentencePayload } from "../src/api.js";
import {
  GRAY,
  allChosen,
  choiceFor,
  chosenLabel,
  documentText,
  hashForSession,
  initialState,
  segmentColor,
  sessionFromHash,
} from "../src/state.js";

function segment(kind: "translated" | "gray", options: string[] = []): Segment {
  return {
    kind,
    tokenSpan: [0, 1],
    charSpan: [0, 4],
    text: "word",
    options,
    segmentId: kind === "translated" ? "e1" : null,
  };
}

function payload(segments: Segment[], choices: SentencePayload["choices"] = {}): SentencePayload {
  return {
    index: 0,
    source: "src",
    segments,
    fuzzyMatches: [],
    choices,
    accepted: false,
    target: null,
  };
}

describe("segmentColor", () => {
  it("is gray for gray segments", () => {
    expect(segmentColor(segment("gray"), 0)).toBe(GRAY);
  });

  it("is deterministic by index", () => {
    const seg = segment("translated", ["x"]);
    expect(segmentColor(seg, 2)).toBe(segmentColor(seg, 2));
    expect(segmentColor(seg, 0)).not.toBe(segmentColor(seg, 1));
  });
});

describe("choices", () => {
  it("allChosen only when every segment has a choice", () => {
    const p = payload([segment("translated", ["a"]), segment("gray")]);
    expect(allChosen(p)).toBe(false);
    p.choices["0"] = { option: 0 };
    expect(allChosen(p)).toBe(false);
    p.choices["1"] = { custom: "texto" };
    expect(allChosen(p)).toBe(true);
  });

  it("chosenLabel resolves options and custom text", () => {
    const seg = segment("translated", ["uno", "dos"]);
    expect(chosenLabel(seg, { option: 1 })).toBe("dos");
    expect(chosenLabel(seg, { custom: "propio" })).toBe("propio");
    expect(chosenLabel(seg, choiceFor(payload([seg]), 0))).toBe("");
  });
});

describe("document pane", () => {
  it("joins accepted sentences in index order", () => {
    const state = initialState();
    state.document.set(2, "Tercera");
    state.document.set(0, "Primera");
    expect(documentText(state)).toBe("Primera\nTercera");
  });
});

describe("session hash", () => {
  it("round trips", () => {
    expect(sessionFromHash(hashForSession("abc-123"))).toBe("abc-123");
  });

  it("rejects garbage", () => {
    expect(sessionFromHash("#other")).toBeNull();
    expect(sessionFromHash("")).toBeNull();
  });
});
