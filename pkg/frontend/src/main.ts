/**
 * Browser shell: hash routing, effect execution, and event wiring around the
 * pure state machine and screen builders. All game logic stays server-side;
 * this file only moves data between the API and the views.
 */

import { ApiClient, ApiError } from "./api";
import { feedbackFromResult } from "./feedback";
import {
  gameFlow,
  initialState,
  type Effect,
  type GameEvent,
  type GameViewState,
} from "./state";
import type { AccountDoc, Modality } from "./types";
import {
  badgesScreen,
  gameScreen,
  homeScreen,
  leaderboardScreen,
  profileScreen,
  registerScreen,
  renderShell,
  statsScreen,
  tutorialScreen,
  welcomeScreen,
  type ScreenId,
} from "./views";

const api = new ApiClient();

interface AppState {
  screen: ScreenId;
  account: AccountDoc | null;
  game: GameViewState | null;
  tutorialStep: number;
  boardModality: Modality | null;
  notice: string | null;
}

const app: AppState = {
  screen: "welcome",
  account: null,
  game: null,
  tutorialStep: 0,
  boardModality: null,
  notice: null,
};

function root(): HTMLElement {
  return document.getElementById("app")!;
}

function dispatch(event: GameEvent): void {
  if (!app.game) {
    return;
  }
  const step = gameFlow(app.game, event);
  app.game = step.state;
  render();
  for (const effect of step.effects) {
    runEffect(effect);
  }
}

function runEffect(effect: Effect): void {
  const fail = (error: unknown) =>
    dispatch({
      type: "API_ERROR",
      message: error instanceof ApiError ? error.message : "network problem",
    });
  switch (effect.kind) {
    case "startGame":
      api.startGame(effect.modality, effect.moodRating)
        .then((doc) => dispatch({ type: "SESSION_STARTED", sessionId: doc.session }))
        .catch(fail);
      break;
    case "serveSnippet":
      api.nextSnippet(effect.sessionId)
        .then((doc) => dispatch({
          type: "SNIPPET_RECEIVED", snippet: doc.snippet, counted: doc.counted,
        }))
        .catch(fail);
      break;
    case "respond":
      api.respond(effect.sessionId, effect.label)
        .then((doc) => dispatch({ type: "RESULT_RECEIVED", result: doc }))
        .catch(fail);
      break;
    case "endGame":
      api.endGame(effect.sessionId)
        .then((doc) => dispatch({ type: "SUMMARY_RECEIVED", summary: doc }))
        .catch(fail);
      break;
  }
}

function render(): void {
  let content: string;
  switch (app.screen) {
    case "welcome":
      content = welcomeScreen(app.notice);
      break;
    case "register":
      content = registerScreen(app.notice);
      break;
    case "home":
      content = homeScreen(app.account?.display_name ?? "player");
      break;
    case "game":
      content = app.game
        ? gameScreen(app.game, app.game.lastResult
            ? feedbackFromResult(app.game.lastResult) : null)
        : homeScreen(app.account?.display_name ?? "player");
      break;
    case "tutorial":
      content = tutorialScreen(app.tutorialStep);
      break;
    default:
      content = `<section class="card"><p class="hint">Loading…</p></section>`;
  }
  root().innerHTML = renderShell(app.screen, content, app.account !== null);
  wire();
  app.notice = null;
}

async function renderAsyncScreens(): Promise<void> {
  try {
    if (app.screen === "leaderboard") {
      const board = await api.leaderboard(app.boardModality ?? undefined);
      root().innerHTML = renderShell(
        "leaderboard",
        leaderboardScreen(board.entries, app.boardModality),
        app.account !== null);
    } else if (app.screen === "stats") {
      root().innerHTML = renderShell("stats", statsScreen(await api.myStats()),
        true);
    } else if (app.screen === "badges") {
      const progress = await api.badgeProgress();
      root().innerHTML = renderShell("badges", badgesScreen(progress.badges), true);
    } else if (app.screen === "profile" && app.account) {
      app.account = await api.profile();
      root().innerHTML = renderShell("profile", profileScreen(app.account), true);
    }
    wire();
  } catch (error) {
    app.notice = error instanceof ApiError ? error.message : "network problem";
    render();
  }
}

function goto(screen: ScreenId): void {
  const needsAuth: ScreenId[] = ["home", "game", "stats", "badges", "profile"];
  if (needsAuth.includes(screen) && app.account === null) {
    screen = "welcome";
  }
  app.screen = screen;
  if (["leaderboard", "stats", "badges", "profile"].includes(screen)) {
    render();
    void renderAsyncScreens();
  } else {
    render();
  }
}

function wire(): void {
  const on = (id: string, type: string, handler: (e: Event) => void) => {
    const el = document.getElementById(id);
    if (el) {
      el.addEventListener(type, handler);
    }
  };

  on("login-form", "submit", async (e) => {
    e.preventDefault();
    const email = (document.getElementById("login-email") as HTMLInputElement).value;
    const password =
      (document.getElementById("login-password") as HTMLInputElement).value;
    try {
      await api.login(email, password || undefined);
      app.account = await api.profile();
      goto("home");
    } catch (error) {
      app.notice = error instanceof ApiError ? error.message : "network problem";
      render();
    }
  });

  on("guest-button", "click", async () => {
    try {
      await api.guest();
      app.account = await api.profile();
      goto("home");
    } catch (error) {
      app.notice = error instanceof ApiError ? error.message : "network problem";
      render();
    }
  });

  on("register-form", "submit", async (e) => {
    e.preventDefault();
    const value = (id: string) =>
      (document.getElementById(id) as HTMLInputElement).value;
    try {
      const created = await api.register({
        email: value("reg-email"),
        display_name: value("reg-name") || undefined,
        age: value("reg-age") ? Number(value("reg-age")) : undefined,
        languages: value("reg-languages")
          .split(",").map((s) => s.trim()).filter(Boolean),
        password: value("reg-password") || undefined,
        info_sheet_ack:
          (document.getElementById("reg-ack") as HTMLInputElement).checked,
      });
      // The activation link normally arrives by email; the transport is
      // pluggable, so this build completes activation in place.
      await api.activate(created.activation_token);
      app.account = await api.profile();
      goto("home");
    } catch (error) {
      app.notice = error instanceof ApiError ? error.message : "network problem";
      render();
    }
  });

  document.querySelectorAll<HTMLButtonElement>("[data-modality]").forEach((btn) =>
    btn.addEventListener("click", () => {
      app.game = initialState(btn.dataset.modality as Modality);
      app.screen = "game";
      render();
    }));

  document.querySelectorAll<HTMLButtonElement>("[data-mood]").forEach((btn) =>
    btn.addEventListener("click", () =>
      dispatch({ type: "SUBMIT_MOOD", rating: Number(btn.dataset.mood) })));

  on("label-form", "submit", (e) => {
    e.preventDefault();
    const input = document.getElementById("label-input") as HTMLInputElement;
    dispatch({ type: "SUBMIT_LABEL", label: input.value });
  });

  on("snippet-media", "play", () => {
    if (app.game && !app.game.mediaStarted) {
      dispatch({ type: "MEDIA_STARTED" });
    }
  });
  on("replay-media", "click", () => {
    const media = document.getElementById("snippet-media") as
      HTMLMediaElement | null;
    if (media) {
      media.currentTime = 0;
      void media.play();
    }
  });

  on("next-snippet", "click", () => dispatch({ type: "NEXT_SNIPPET" }));
  on("exit-game", "click", () => dispatch({ type: "EXIT_GAME" }));
  on("play-again", "click", () => {
    app.game = null;
    goto("home");
  });

  on("tutorial-back", "click", () => {
    app.tutorialStep -= 1;
    render();
  });
  on("tutorial-next", "click", () => {
    app.tutorialStep += 1;
    render();
  });
  on("tutorial-restart", "click", () => {
    app.tutorialStep = 0;
    render();
  });

  document.querySelectorAll<HTMLButtonElement>("[data-board]").forEach((btn) =>
    btn.addEventListener("click", () => {
      const value = btn.dataset.board;
      app.boardModality = value === "all" ? null : (value as Modality);
      void renderAsyncScreens();
    }));

  on("profile-form", "submit", async (e) => {
    e.preventDefault();
    const value = (id: string) =>
      (document.getElementById(id) as HTMLInputElement).value;
    const fileInput = document.getElementById("profile-avatar") as HTMLInputElement;
    let avatar: string | undefined;
    if (fileInput?.files?.length) {
      avatar = await new Promise<string>((resolve) => {
        const reader = new FileReader();
        reader.onload = () => resolve(String(reader.result));
        reader.readAsDataURL(fileInput.files![0]);
      });
    }
    try {
      app.account = await api.updateProfile({
        display_name: value("profile-name") || undefined,
        age: value("profile-age") ? Number(value("profile-age")) : undefined,
        languages: value("profile-languages")
          .split(",").map((s) => s.trim()).filter(Boolean),
        privacy:
          (document.getElementById("profile-privacy") as HTMLInputElement).checked,
        avatar,
      } as Partial<AccountDoc>);
      app.notice = "Profile saved.";
      render();
    } catch (error) {
      app.notice = error instanceof ApiError ? error.message : "network problem";
      render();
    }
  });
}

function route(): void {
  const hash = window.location.hash.replace(/^#\//, "") || "welcome";
  goto((["welcome", "register", "home", "game", "leaderboard", "stats",
         "badges", "profile", "tutorial"] as ScreenId[])
    .includes(hash as ScreenId) ? (hash as ScreenId) : "welcome");
}

window.addEventListener("hashchange", route);
window.addEventListener("DOMContentLoaded", route);
