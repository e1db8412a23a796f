// Pure view-state helpers: everything here is testable without a DOM.
// The server is the source of truth; this module only mirrors it.

import type { Choice, Segment, SentencePayload } from "./api.js";

// Deterministic palette keyed by segment index so screenshots reproduce.
const PALETTE = ["#2563eb", "#d97706", "#059669", "#dc2626", "#7c3aed", "#0891b2"];
export const GRAY = "#9ca3af";

export function segmentColor(segment: Segment, index: number): string {
  return segment.kind === "gray" ? GRAY : PALETTE[index % PALETTE.length];
}

export function choiceFor(
  payload: SentencePayload,
  segmentIndex: number,
): Choice | undefined {
  return payload.choices[String(segmentIndex)];
}

export function allChosen(payload: SentencePayload): boolean {
  return payload.segments.every((_, i) => choiceFor(payload, i) !== undefined);
}

export function chosenLabel(segment: Segment, choice: Choice | undefined): string {
  if (!choice) return "";
  if ("custom" in choice) return choice.custom;
  return segment.options[choice.option] ?? "";
}

export interface ViewState {
  sessionId: string | null;
  sentenceCount: number;
  current: number;
  sentence: SentencePayload | null;
  selectedSegment: number | null;
  // accepted target sentences by index, straight from server responses
  document: Map<number, string>;
  busy: boolean;
  error: string | null;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    sentenceCount: 0,
    current: 0,
    sentence: null,
    selectedSegment: null,
    document: new Map(),
    busy: false,
    error: null,
  };
}

export function documentText(state: ViewState): string {
  const indices = [...state.document.keys()].sort((a, b) => a - b);
  return indices.map((i) => state.document.get(i)).join("\n");
}

export function sessionFromHash(hash: string): string | null {
  const match = /^#s=([A-Za-z0-9_-]+)/.exec(hash);
  return match ? match[1] : null;
}

export function hashForSession(sessionId: string): string {
  return `#s=${sessionId}`;
}
