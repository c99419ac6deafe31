/**
 * Thin typed client for /api/v1. Game-mutating calls are funneled through a
 * per-client queue so at most one is in flight at a time; reads go straight
 * out. Server error envelopes become ApiError with the stable wire code.
 */

import type {
  AccountDoc,
  AuthTokenDoc,
  BadgeProgressDoc,
  LeaderboardEntryDoc,
  Modality,
  RespondResultDoc,
  ServeDoc,
  SummaryDoc,
} from "./types";

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  token: string | null = null;
  private queue: Promise<unknown> = Promise.resolve();

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) {
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    let doc: any = null;
    try {
      doc = await response.json();
    } catch {
      doc = null;
    }
    if (!response.ok) {
      const code = doc?.error?.code ?? "UNKNOWN";
      const message = doc?.error?.message ?? `request failed (${response.status})`;
      throw new ApiError(code, message, response.status);
    }
    return doc as T;
  }

  /** Serialize game-mutating calls; failures do not wedge the queue. */
  private enqueue<T>(task: () => Promise<T>): Promise<T> {
    const next = this.queue.then(task, task);
    this.queue = next.catch(() => undefined);
    return next;
  }

  // -- accounts ------------------------------------------------------------

  register(body: {
    email: string;
    info_sheet_ack: boolean;
    age?: number;
    languages?: string[];
    password?: string;
    display_name?: string;
  }): Promise<{ account: AccountDoc; activation_token: string }> {
    return this.request("POST", "/register", body);
  }

  async activate(token: string): Promise<AuthTokenDoc> {
    const auth = await this.request<AuthTokenDoc>("POST", "/activate", { token });
    this.token = auth.token;
    return auth;
  }

  async login(email: string, password?: string): Promise<AuthTokenDoc> {
    const auth = await this.request<AuthTokenDoc>("POST", "/login",
      { email, password });
    this.token = auth.token;
    return auth;
  }

  async guest(): Promise<AuthTokenDoc> {
    const auth = await this.request<AuthTokenDoc>("POST", "/guest");
    this.token = auth.token;
    return auth;
  }

  profile(): Promise<AccountDoc> {
    return this.request("GET", "/profile");
  }

  updateProfile(changes: Partial<AccountDoc>): Promise<AccountDoc> {
    return this.request("PUT", "/profile", changes);
  }

  // -- game (queued mutations) ------------------------------------------------

  startGame(modality: Modality, moodRating: number): Promise<{ session: string }> {
    return this.enqueue(() =>
      this.request("POST", "/games", { modality, mood_rating: moodRating }));
  }

  nextSnippet(sessionId: string): Promise<ServeDoc> {
    return this.enqueue(() =>
      this.request("GET", `/games/${sessionId}/snippet`));
  }

  respond(sessionId: string, label: string): Promise<RespondResultDoc> {
    return this.enqueue(() =>
      this.request("POST", `/games/${sessionId}/responses`, { label }));
  }

  endGame(sessionId: string): Promise<SummaryDoc> {
    return this.enqueue(() =>
      this.request("POST", `/games/${sessionId}/end`));
  }

  // -- boards ---------------------------------------------------------------------

  leaderboard(modality?: Modality, limit = 10):
      Promise<{ entries: LeaderboardEntryDoc[] }> {
    const scope = modality ? `&modality=${modality}` : "";
    return this.request("GET", `/leaderboard?limit=${limit}${scope}`);
  }

  myStats(): Promise<any> {
    return this.request("GET", "/stats/me");
  }

  badgeProgress(): Promise<{ badges: BadgeProgressDoc[] }> {
    return this.request("GET", "/badges/progress");
  }
}
