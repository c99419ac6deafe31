/**
 * Screen builders: pure functions from view data to HTML strings. The DOM
 * shell injects them and wires events by element id. Every screen is wrapped
 * in a shell whose menu always links the tutorial.
 */

import { avatarFor } from "./avatar";
import type { FeedbackView } from "./feedback";
import { canSubmitLabel, type GameViewState } from "./state";
import { TUTORIAL_STEPS } from "./tutorial";
import type {
  AccountDoc,
  BadgeProgressDoc,
  LeaderboardEntryDoc,
  SummaryDoc,
} from "./types";

export type ScreenId =
  | "welcome"
  | "register"
  | "home"
  | "game"
  | "leaderboard"
  | "stats"
  | "badges"
  | "profile"
  | "tutorial";

export const ALL_SCREENS: ScreenId[] = [
  "welcome", "register", "home", "game", "leaderboard", "stats", "badges",
  "profile", "tutorial",
];

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderShell(screen: ScreenId, content: string,
                            signedIn: boolean): string {
  const links: [string, string][] = signedIn
    ? [["home", "Play"], ["leaderboard", "Leaderboard"], ["stats", "My stats"],
       ["badges", "Badges"], ["profile", "Profile"], ["tutorial", "Tutorial"]]
    : [["welcome", "Sign in"], ["register", "Register"],
       ["leaderboard", "Leaderboard"], ["tutorial", "Tutorial"]];
  const nav = links
    .map(([id, label]) =>
      `<a href="#/${id}" data-nav="${id}"` +
      `${id === screen ? ' class="current"' : ""}>${label}</a>`)
    .join("");
  return `<header class="top"><span class="brand">mood game</span>` +
    `<nav>${nav}</nav></header><main data-screen="${screen}">${content}</main>`;
}

// -- screens -----------------------------------------------------------------

export function welcomeScreen(notice: string | null = null): string {
  return `
    ${noticeBlock(notice)}
    <section class="card">
      <h1>Label moods, score points</h1>
      <p>Short snippets, your words for the mood they carry. Agreeing with
      other players earns bonuses.</p>
      <form id="login-form">
        <label>Email <input type="email" id="login-email" required></label>
        <label>Password (if set) <input type="password" id="login-password"></label>
        <button type="submit">Sign in</button>
      </form>
      <button id="guest-button" class="secondary">Play as guest</button>
      <p>New here? <a href="#/register" data-nav="register">Create an account</a>
      or read the <a href="#/tutorial" data-nav="tutorial">tutorial</a>.</p>
    </section>`;
}

export function registerScreen(notice: string | null = null): string {
  return `
    ${noticeBlock(notice)}
    <section class="card">
      <h1>Create your account</h1>
      <form id="register-form">
        <label>Email <input type="email" id="reg-email" required></label>
        <label>Display name <input type="text" id="reg-name"></label>
        <label>Age <input type="number" id="reg-age" min="0"></label>
        <label>Languages (comma separated)
          <input type="text" id="reg-languages" placeholder="en, it"></label>
        <label>Password (optional) <input type="password" id="reg-password"></label>
        <label class="inline"><input type="checkbox" id="reg-ack">
          I have read the study information sheet</label>
        <button type="submit">Register</button>
      </form>
      <div id="activation-hint" class="hint hidden">
        Check your inbox for the activation link.
      </div>
    </section>`;
}

export function homeScreen(displayName: string): string {
  return `
    <section class="card">
      <h1>Hello, ${escapeHtml(displayName)}</h1>
      <p>Pick a mode to start a game. Each game begins with a quick mood
      check-in.</p>
      <div class="mode-grid">
        <button data-modality="text">Text snippets</button>
        <button data-modality="audio">Audio snippets</button>
        <button data-modality="video">Video snippets</button>
      </div>
    </section>`;
}

export function moodSurveyBlock(state: GameViewState): string {
  const scale = [1, 2, 3, 4, 5]
    .map((n) => `<button data-mood="${n}" class="mood">${n}</button>`)
    .join("");
  return `
    <section class="card">
      <h1>How do you feel right now?</h1>
      <p>1 = very low, 5 = very good. Your answer starts the
      ${state.modality} game.</p>
      <div class="mood-scale">${scale}</div>
    </section>`;
}

export function snippetBlock(state: GameViewState): string {
  const snippet = state.snippet;
  if (!snippet) {
    return `<section class="card"><p class="hint">Fetching a snippet…</p></section>`;
  }
  const title = snippet.title
    ? `<h2>${escapeHtml(snippet.title)}</h2>` : "";
  let media: string;
  if (snippet.modality === "text") {
    media = `<blockquote class="snippet-text">${escapeHtml(snippet.payload)}</blockquote>`;
  } else {
    const tag = snippet.modality === "audio" ? "audio" : "video";
    media = `
      <${tag} id="snippet-media" controls preload="metadata"
        src="${escapeHtml(snippet.payload)}"></${tag}>
      <button id="replay-media" class="secondary">Replay</button>
      ${state.mediaStarted ? "" :
        `<p class="hint">Press play before answering.</p>`}`;
  }
  const disabled = canSubmitLabel(state) ? "" : "disabled";
  const replayNote = state.counted ? "" :
    `<p class="hint">You have answered every snippet — replays score flat
     points and do not change label popularity.</p>`;
  return `
    <section class="card">
      ${title}
      ${media}
      ${replayNote}
      <form id="label-form">
        <label>Which mood does this convey?
          <input type="text" id="label-input" maxlength="64"
            autocomplete="off" ${disabled}></label>
        <button type="submit" id="label-submit" ${disabled}>Submit</button>
      </form>
      <button id="exit-game" class="secondary">Exit game</button>
    </section>`;
}

export function resultBlock(feedback: FeedbackView): string {
  const lines = [
    feedback.agreeingLine,
    feedback.newLabelExplainer,
    feedback.highQualityPraise,
    feedback.cheer,
  ]
    .filter((line): line is string => line !== null)
    .map((line) => `<p>${escapeHtml(line)}</p>`)
    .join("");
  const toasts = feedback.badgeToasts
    .map((t) => `<div class="toast">${escapeHtml(t)}</div>`)
    .join("");
  const bars = feedback.progressBars
    .map((bar) => `
      <div class="progress-row">
        <span>${escapeHtml(bar.badge)}</span>
        <div class="bar"><div class="fill" style="width:${bar.percent}%"></div></div>
        <span>${bar.earned ? "earned" : `${bar.current}/${bar.threshold}`}</span>
      </div>`)
    .join("");
  return `
    <section class="card result">
      <div class="score" id="score-line">${escapeHtml(feedback.scoreLine)}</div>
      ${lines}
      ${toasts}
      ${bars ? `<div class="progress">${bars}</div>` : ""}
      <button id="next-snippet">Next snippet</button>
      <button id="exit-game" class="secondary">Exit game</button>
    </section>`;
}

export function summaryBlock(summary: SummaryDoc): string {
  const nearby = summary.nearby
    .map((row) => `<tr><td>#${row.rank}</td>` +
      `<td>${escapeHtml(row.display_name)}</td><td>${row.total_score}</td></tr>`)
    .join("");
  const badges = summary.badges_earned.length
    ? `<p>Badges this game: ${summary.badges_earned.map(escapeHtml).join(", ")}</p>`
    : "";
  const progress = summary.badge_progress
    .filter((row) => !row.earned)
    .map((row) => `<li>${escapeHtml(row.badge)}: ${row.current}/${row.threshold}</li>`)
    .join("");
  return `
    <section class="card">
      <h1>Game over</h1>
      <p class="score">${summary.game_score} points this game</p>
      <p>Total score: ${summary.total_score}
         ${summary.rank !== null ? `· rank #${summary.rank}` : ""}</p>
      ${nearby ? `<table class="nearby"><tbody>${nearby}</tbody></table>` : ""}
      ${badges}
      ${progress ? `<p>Still to earn:</p><ul>${progress}</ul>` : ""}
      <p>${escapeHtml(summary.message.text)}</p>
      <button id="play-again">Play again</button>
      <a href="#/leaderboard" data-nav="leaderboard">See the leaderboard</a>
    </section>`;
}

export function gameScreen(state: GameViewState,
                           feedback: FeedbackView | null): string {
  const notice = noticeBlock(state.notice);
  switch (state.phase) {
    case "mood_survey":
      return notice + moodSurveyBlock(state);
    case "awaiting_snippet":
      return notice +
        `<section class="card"><p class="hint">Fetching a snippet…</p></section>`;
    case "presenting_snippet":
      return notice + snippetBlock(state);
    case "showing_result":
      return notice + (feedback ? resultBlock(feedback)
        : `<section class="card"><p class="hint">Scoring…</p></section>`);
    case "game_summary":
      return notice + (state.summary ? summaryBlock(state.summary)
        : `<section class="card"><p class="hint">Summing up…</p></section>`);
  }
}

export function leaderboardScreen(entries: LeaderboardEntryDoc[],
                                  modality: string | null): string {
  const rows = entries
    .map((e) => `
      <tr><td>#${e.rank}</td>
      <td><img class="avatar" alt="" src="${avatarFor(e.avatar, e.display_name)}">
          ${escapeHtml(e.display_name)}</td>
      <td>${e.total_score}</td></tr>`)
    .join("");
  const tabs = [null, "text", "audio", "video"]
    .map((m) => `<button data-board="${m ?? "all"}"` +
      `${m === modality ? ' class="current"' : ""}>${m ?? "all"}</button>`)
    .join("");
  return `
    <section class="card">
      <h1>Leaderboard</h1>
      <div class="tabs">${tabs}</div>
      ${rows ? `<table><tbody>${rows}</tbody></table>`
             : "<p class='hint'>No ranked players yet.</p>"}
    </section>`;
}

export function statsScreen(stats: any): string {
  const scope = stats?.overall ?? {};
  const rows = [
    ["Total score", scope.total_score],
    ["Highest game score", scope.highest_game_score],
    ["Highest word score", scope.highest_word_score],
    ["Games played", scope.games_played],
    ["Snippets answered", scope.snippets_answered],
    ["Rank", scope.rank ?? "unranked"],
  ]
    .map(([k, v]) => `<tr><td>${k}</td><td>${v ?? 0}</td></tr>`)
    .join("");
  const badges = (stats?.badges ?? [])
    .map((b: { badge: string }) => `<li>${escapeHtml(b.badge)}</li>`)
    .join("");
  return `
    <section class="card">
      <h1>My stats</h1>
      <table><tbody>${rows}</tbody></table>
      ${badges ? `<h2>Badges won</h2><ul>${badges}</ul>` : ""}
    </section>`;
}

export function badgesScreen(rows: BadgeProgressDoc[]): string {
  const items = rows
    .map((row) => `
      <div class="progress-row">
        <span>${escapeHtml(row.badge)}</span>
        <div class="bar"><div class="fill" style="width:${
          row.threshold ? Math.min(100, Math.round((row.current / row.threshold) * 100)) : 0
        }%"></div></div>
        <span>${row.earned ? "earned" : `${row.current}/${row.threshold}`}</span>
      </div>`)
    .join("");
  return `<section class="card"><h1>Badge progress</h1>${items}</section>`;
}

export function profileScreen(account: AccountDoc): string {
  return `
    <section class="card">
      <h1>Profile</h1>
      <img class="avatar large" alt="avatar"
        src="${avatarFor(account.avatar, account.email ?? account.display_name)}">
      <form id="profile-form">
        <label>Display name
          <input type="text" id="profile-name"
            value="${escapeHtml(account.display_name)}"></label>
        <label>Age <input type="number" id="profile-age" min="0"
          value="${account.age ?? ""}"></label>
        <label>Languages <input type="text" id="profile-languages"
          value="${escapeHtml(account.languages.join(", "))}"></label>
        <label class="inline"><input type="checkbox" id="profile-privacy"
          ${account.privacy ? "checked" : ""}>
          Hide me from the leaderboard and members page</label>
        <label>Upload avatar <input type="file" id="profile-avatar"
          accept="image/*"></label>
        <button type="submit">Save</button>
      </form>
      <p><a href="#/tutorial" data-nav="tutorial">Re-read the study information
      and tutorial</a></p>
    </section>`;
}

export function tutorialScreen(step: number): string {
  const clamped = Math.max(0, Math.min(step, TUTORIAL_STEPS.length - 1));
  const current = TUTORIAL_STEPS[clamped];
  const dots = TUTORIAL_STEPS
    .map((_, i) => `<span class="dot${i === clamped ? " on" : ""}"></span>`)
    .join("");
  return `
    <section class="card">
      <h1>${escapeHtml(current.title)}</h1>
      <p>${escapeHtml(current.body)}</p>
      <div class="dots">${dots}</div>
      <div class="tutorial-nav">
        <button id="tutorial-back" ${clamped === 0 ? "disabled" : ""}>Back</button>
        <button id="tutorial-next"
          ${clamped === TUTORIAL_STEPS.length - 1 ? "disabled" : ""}>Next</button>
        <button id="tutorial-restart" class="secondary">Restart</button>
      </div>
    </section>`;
}

function noticeBlock(notice: string | null): string {
  return notice
    ? `<div class="notice" role="alert">${escapeHtml(notice)}</div>`
    : "";
}
