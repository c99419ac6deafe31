/** Wire types for /api/v1 responses the client consumes. */

export type Modality = "text" | "audio" | "video";

export interface AuthTokenDoc {
  token: string;
  player: string;
  expires_at: number;
  guest: boolean;
}

export interface AccountDoc {
  player: string;
  email: string | null;
  activated: boolean;
  guest: boolean;
  age: number | null;
  languages: string[];
  privacy: boolean;
  avatar: string | null;
  display_name: string;
  info_sheet_acknowledged: boolean;
}

export interface SnippetDoc {
  id: string;
  modality: Modality;
  payload: string;
  title: string | null;
}

export interface ScoreBreakdownDoc {
  p: number;
  a: number;
  base: number;
  m_percent: number;
  multiplier_factor: number;
  hq_applied: boolean;
  counted: boolean;
  final: number;
}

export type MotivatorKind =
  | "cheer"
  | "score_explainer"
  | "new_label_education"
  | "end_of_game_encouragement"
  | "badge_progress"
  | "high_quality_praise";

export interface MotivatorDoc {
  kind: MotivatorKind;
  text: string;
  data: Record<string, unknown>;
}

export interface RespondResultDoc {
  breakdown: ScoreBreakdownDoc;
  messages: MotivatorDoc[];
  new_badges: string[];
  game_score: number;
}

export interface SummaryDoc {
  session: string;
  game_score: number;
  total_score: number;
  rank: number | null;
  modality_rank: number | null;
  nearby: { rank: number; player: string; display_name: string; total_score: number }[];
  badges_earned: string[];
  badge_progress: BadgeProgressDoc[];
  message: MotivatorDoc;
}

export interface BadgeProgressDoc {
  badge: string;
  metric: string;
  threshold: number;
  current: number;
  earned: boolean;
  earned_at?: number | null;
}

export interface LeaderboardEntryDoc {
  rank: number;
  player: string;
  display_name: string;
  avatar: string | null;
  total_score: number;
}

export interface ServeDoc {
  snippet: SnippetDoc;
  counted: boolean;
}
