import { describe, expect, it } from "vitest";

import {
  canSubmitLabel,
  gameFlow,
  initialState,
  type GameEvent,
  type GameViewState,
  type Phase,
} from "../src/state";
import type { RespondResultDoc, SnippetDoc, SummaryDoc } from "../src/types";

const textSnippet: SnippetDoc = {
  id: "sn-1", modality: "text", payload: "a quiet line", title: null,
};
const audioSnippet: SnippetDoc = {
  id: "sn-2", modality: "audio", payload: "media/sn-2.ogg", title: "Aria",
};

const result: RespondResultDoc = {
  breakdown: {
    p: 0, a: 0, base: 100, m_percent: 0, multiplier_factor: 1,
    hq_applied: false, counted: true, final: 100,
  },
  messages: [],
  new_badges: [],
  game_score: 100,
};

const summary: SummaryDoc = {
  session: "s1", game_score: 100, total_score: 100, rank: 1,
  modality_rank: 1, nearby: [], badges_earned: [], badge_progress: [],
  message: { kind: "end_of_game_encouragement", text: "bye", data: {} },
};

const EVERY_EVENT: GameEvent[] = [
  { type: "SUBMIT_MOOD", rating: 3 },
  { type: "SUBMIT_MOOD", rating: 0 },
  { type: "SESSION_STARTED", sessionId: "s1" },
  { type: "SNIPPET_RECEIVED", snippet: textSnippet, counted: true },
  { type: "SNIPPET_RECEIVED", snippet: audioSnippet, counted: false },
  { type: "MEDIA_STARTED" },
  { type: "SUBMIT_LABEL", label: "calm" },
  { type: "SUBMIT_LABEL", label: "   " },
  { type: "RESULT_RECEIVED", result },
  { type: "NEXT_SNIPPET" },
  { type: "EXIT_GAME" },
  { type: "SUMMARY_RECEIVED", summary },
  { type: "API_ERROR", message: "oops" },
];

const ALLOWED: Record<Phase, Phase[]> = {
  mood_survey: ["mood_survey", "awaiting_snippet"],
  awaiting_snippet: ["awaiting_snippet", "presenting_snippet", "game_summary"],
  presenting_snippet: ["presenting_snippet", "showing_result", "game_summary"],
  showing_result: ["showing_result", "awaiting_snippet", "game_summary"],
  game_summary: ["game_summary"],
};

describe("phase graph", () => {
  it("no snippet view is reachable before a mood rating, over the whole graph", () => {
    // Exhaustive breadth-first walk over every reachable abstract state.
    const seen = new Set<string>();
    const frontier: GameViewState[] = [initialState("text"), initialState("audio")];
    let checked = 0;
    while (frontier.length > 0) {
      const state = frontier.pop()!;
      const key = JSON.stringify(state);
      if (seen.has(key)) {
        continue;
      }
      seen.add(key);
      for (const event of EVERY_EVENT) {
        const step = gameFlow(state, event);
        checked += 1;
        expect(step.effects.length).toBeLessThanOrEqual(1);
        expect(ALLOWED[state.phase]).toContain(step.state.phase);
        if (step.state.phase === "presenting_snippet" ||
            step.state.snippet !== null) {
          expect(step.state.moodRating).not.toBeNull();
        }
        if (step.state.phase === "game_summary") {
          expect(step.state.moodRating).not.toBeNull();
        }
        frontier.push(step.state);
      }
    }
    expect(checked).toBeGreaterThan(100);
    expect(seen.size).toBeGreaterThan(10);
  });

  it("walks the happy path in order", () => {
    let step = { state: initialState("text"), effects: [] as unknown[] };
    step = gameFlow(step.state, { type: "SUBMIT_MOOD", rating: 4 });
    expect(step.state.phase).toBe("mood_survey");
    expect(step.effects).toEqual([
      { kind: "startGame", modality: "text", moodRating: 4 },
    ]);
    step = gameFlow(step.state, { type: "SESSION_STARTED", sessionId: "s1" });
    expect(step.state.phase).toBe("awaiting_snippet");
    step = gameFlow(step.state,
      { type: "SNIPPET_RECEIVED", snippet: textSnippet, counted: true });
    expect(step.state.phase).toBe("presenting_snippet");
    step = gameFlow(step.state, { type: "SUBMIT_LABEL", label: "calm" });
    expect(step.effects).toEqual([
      { kind: "respond", sessionId: "s1", label: "calm" },
    ]);
    step = gameFlow(step.state, { type: "RESULT_RECEIVED", result });
    expect(step.state.phase).toBe("showing_result");
    step = gameFlow(step.state, { type: "EXIT_GAME" });
    step = gameFlow(step.state, { type: "SUMMARY_RECEIVED", summary });
    expect(step.state.phase).toBe("game_summary");
  });

  it("rejects a mood outside 1..5 with an inline notice", () => {
    const step = gameFlow(initialState("text"), { type: "SUBMIT_MOOD", rating: 0 });
    expect(step.state.phase).toBe("mood_survey");
    expect(step.state.notice).toMatch(/1 to 5/);
    expect(step.effects).toEqual([]);
  });

  it("keeps the phase on API errors", () => {
    let step = gameFlow(initialState("text"), { type: "SUBMIT_MOOD", rating: 2 });
    step = gameFlow(step.state, { type: "API_ERROR", message: "boom" });
    expect(step.state.phase).toBe("mood_survey");
    expect(step.state.notice).toBe("boom");
    expect(step.state.requestInFlight).toBe(false);
  });

  it("allows at most one in-flight mutation", () => {
    let step = gameFlow(initialState("text"), { type: "SUBMIT_MOOD", rating: 2 });
    step = gameFlow(step.state, { type: "SESSION_STARTED", sessionId: "s1" });
    step = gameFlow(step.state,
      { type: "SNIPPET_RECEIVED", snippet: textSnippet, counted: true });
    const first = gameFlow(step.state, { type: "SUBMIT_LABEL", label: "calm" });
    expect(first.effects).toHaveLength(1);
    const second = gameFlow(first.state, { type: "SUBMIT_LABEL", label: "calm" });
    expect(second.effects).toHaveLength(0);
    const exit = gameFlow(first.state, { type: "EXIT_GAME" });
    expect(exit.effects).toHaveLength(0);
  });
});

describe("media gating", () => {
  function presentingAudio(): GameViewState {
    let step = gameFlow(initialState("audio"), { type: "SUBMIT_MOOD", rating: 3 });
    step = gameFlow(step.state, { type: "SESSION_STARTED", sessionId: "s1" });
    step = gameFlow(step.state,
      { type: "SNIPPET_RECEIVED", snippet: audioSnippet, counted: true });
    return step.state;
  }

  it("blocks the label until the media has been started once", () => {
    const state = presentingAudio();
    expect(canSubmitLabel(state)).toBe(false);
    expect(gameFlow(state, { type: "SUBMIT_LABEL", label: "calm" }).effects)
      .toHaveLength(0);
    const started = gameFlow(state, { type: "MEDIA_STARTED" }).state;
    expect(canSubmitLabel(started)).toBe(true);
  });

  it("text snippets need no playback", () => {
    let step = gameFlow(initialState("text"), { type: "SUBMIT_MOOD", rating: 3 });
    step = gameFlow(step.state, { type: "SESSION_STARTED", sessionId: "s1" });
    step = gameFlow(step.state,
      { type: "SNIPPET_RECEIVED", snippet: textSnippet, counted: true });
    expect(canSubmitLabel(step.state)).toBe(true);
  });
});
