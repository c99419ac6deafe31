/**
 * Pure state machine for one play-through.
 *
 * Phases move strictly along
 *   mood_survey -> (awaiting_snippet -> presenting_snippet -> showing_result)* -> game_summary
 * and no snippet can be shown before a mood rating was submitted. The reducer
 * never talks to the network: it returns effects which the shell executes and
 * feeds back as events, keeping at most one game-mutating request in flight.
 */

import type {
  Modality,
  RespondResultDoc,
  SnippetDoc,
  SummaryDoc,
} from "./types";

export type Phase =
  | "mood_survey"
  | "awaiting_snippet"
  | "presenting_snippet"
  | "showing_result"
  | "game_summary";

export interface GameViewState {
  phase: Phase;
  modality: Modality;
  moodRating: number | null;
  sessionId: string | null;
  snippet: SnippetDoc | null;
  counted: boolean;
  mediaStarted: boolean;
  lastResult: RespondResultDoc | null;
  summary: SummaryDoc | null;
  requestInFlight: boolean;
  notice: string | null;
}

export type GameEvent =
  | { type: "SUBMIT_MOOD"; rating: number }
  | { type: "SESSION_STARTED"; sessionId: string }
  | { type: "SNIPPET_RECEIVED"; snippet: SnippetDoc; counted: boolean }
  | { type: "MEDIA_STARTED" }
  | { type: "SUBMIT_LABEL"; label: string }
  | { type: "RESULT_RECEIVED"; result: RespondResultDoc }
  | { type: "NEXT_SNIPPET" }
  | { type: "EXIT_GAME" }
  | { type: "SUMMARY_RECEIVED"; summary: SummaryDoc }
  | { type: "API_ERROR"; message: string };

export type Effect =
  | { kind: "startGame"; modality: Modality; moodRating: number }
  | { kind: "serveSnippet"; sessionId: string }
  | { kind: "respond"; sessionId: string; label: string }
  | { kind: "endGame"; sessionId: string };

export interface Step {
  state: GameViewState;
  effects: Effect[];
}

export function initialState(modality: Modality): GameViewState {
  return {
    phase: "mood_survey",
    modality,
    moodRating: null,
    sessionId: null,
    snippet: null,
    counted: true,
    mediaStarted: false,
    lastResult: null,
    summary: null,
    requestInFlight: false,
    notice: null,
  };
}

const stay = (state: GameViewState): Step => ({ state, effects: [] });

function withNotice(state: GameViewState, notice: string): Step {
  return stay({ ...state, notice });
}

/** True when the label box should accept input: media must have started once. */
export function canSubmitLabel(state: GameViewState): boolean {
  return (
    state.phase === "presenting_snippet" &&
    !state.requestInFlight &&
    (state.modality === "text" || state.mediaStarted)
  );
}

export function gameFlow(state: GameViewState, event: GameEvent): Step {
  switch (event.type) {
    case "SUBMIT_MOOD": {
      if (state.phase !== "mood_survey") {
        return withNotice(state, "The mood survey is already done.");
      }
      if (!Number.isInteger(event.rating) || event.rating < 1 || event.rating > 5) {
        return withNotice(state, "Pick a mood from 1 to 5.");
      }
      if (state.requestInFlight) {
        return stay(state);
      }
      return {
        state: {
          ...state,
          moodRating: event.rating,
          requestInFlight: true,
          notice: null,
        },
        effects: [
          { kind: "startGame", modality: state.modality, moodRating: event.rating },
        ],
      };
    }

    case "SESSION_STARTED": {
      if (state.phase !== "mood_survey" || state.moodRating === null) {
        return stay(state);
      }
      return {
        state: {
          ...state,
          phase: "awaiting_snippet",
          sessionId: event.sessionId,
          requestInFlight: true,
        },
        effects: [{ kind: "serveSnippet", sessionId: event.sessionId }],
      };
    }

    case "SNIPPET_RECEIVED": {
      if (state.phase !== "awaiting_snippet" || state.moodRating === null) {
        return stay(state);
      }
      return stay({
        ...state,
        phase: "presenting_snippet",
        snippet: event.snippet,
        counted: event.counted,
        mediaStarted: false,
        requestInFlight: false,
      });
    }

    case "MEDIA_STARTED":
      return stay({ ...state, mediaStarted: true });

    case "SUBMIT_LABEL": {
      if (!canSubmitLabel(state) || state.sessionId === null) {
        return stay(state);
      }
      if (!event.label.trim()) {
        return withNotice(state, "Type a mood word first.");
      }
      return {
        state: { ...state, requestInFlight: true, notice: null },
        effects: [
          { kind: "respond", sessionId: state.sessionId, label: event.label },
        ],
      };
    }

    case "RESULT_RECEIVED": {
      if (state.phase !== "presenting_snippet") {
        return stay(state);
      }
      return stay({
        ...state,
        phase: "showing_result",
        lastResult: event.result,
        requestInFlight: false,
      });
    }

    case "NEXT_SNIPPET": {
      if (state.phase !== "showing_result" || state.sessionId === null ||
          state.requestInFlight) {
        return stay(state);
      }
      return {
        state: {
          ...state,
          phase: "awaiting_snippet",
          snippet: null,
          requestInFlight: true,
        },
        effects: [{ kind: "serveSnippet", sessionId: state.sessionId }],
      };
    }

    case "EXIT_GAME": {
      const inGame =
        state.phase === "awaiting_snippet" ||
        state.phase === "presenting_snippet" ||
        state.phase === "showing_result";
      if (!inGame || state.sessionId === null || state.requestInFlight) {
        return stay(state);
      }
      return {
        state: { ...state, requestInFlight: true },
        effects: [{ kind: "endGame", sessionId: state.sessionId }],
      };
    }

    case "SUMMARY_RECEIVED": {
      if (state.sessionId === null) {
        return stay(state);
      }
      return stay({
        ...state,
        phase: "game_summary",
        summary: event.summary,
        requestInFlight: false,
      });
    }

    case "API_ERROR":
      // Inline, non-blocking: the phase is preserved on failure.
      return stay({ ...state, requestInFlight: false, notice: event.message });
  }
}
