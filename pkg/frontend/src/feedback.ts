/**
 * View-model for the result screen: score first, then the explainers the
 * server attached. Missing fields fall back to neutral defaults so a partial
 * payload still renders.
 */

import type {
  BadgeProgressDoc,
  MotivatorDoc,
  RespondResultDoc,
  ScoreBreakdownDoc,
} from "./types";

export interface ProgressBar {
  badge: string;
  current: number;
  threshold: number;
  percent: number;
  earned: boolean;
}

export interface FeedbackView {
  scoreLine: string;
  agreeingLine: string | null;
  newLabelExplainer: string | null;
  highQualityPraise: string | null;
  cheer: string | null;
  badgeToasts: string[];
  progressBars: ProgressBar[];
}

function text(messages: MotivatorDoc[], kind: MotivatorDoc["kind"]): string | null {
  const match = messages.find((m) => m.kind === kind);
  return match ? match.text : null;
}

export function buildFeedbackView(
  breakdown: ScoreBreakdownDoc,
  messages: MotivatorDoc[] = [],
  newBadges: string[] = [],
  progress: BadgeProgressDoc[] = [],
): FeedbackView {
  const final = breakdown.final ?? 0;
  const p = breakdown.p ?? 0;
  const counted = breakdown.counted ?? true;

  let newLabelExplainer = text(messages, "new_label_education");
  if (newLabelExplainer === null && p === 0 && counted) {
    newLabelExplainer =
      `You added a new label — ${breakdown.base ?? final} base points!`;
  }

  let highQualityPraise = text(messages, "high_quality_praise");
  if (highQualityPraise === null && breakdown.hq_applied) {
    highQualityPraise = "Nearly everyone agrees with you — bonus applied!";
  }

  return {
    scoreLine: `${final} points`,
    agreeingLine:
      p > 0 ? `${p} player${p === 1 ? "" : "s"} gave this label before you.` : null,
    newLabelExplainer,
    highQualityPraise,
    cheer: text(messages, "cheer"),
    badgeToasts: newBadges.map((name) => `Badge earned: ${name}!`),
    progressBars: progress.map((row) => ({
      badge: row.badge,
      current: row.current,
      threshold: row.threshold,
      percent: row.threshold > 0
        ? Math.min(100, Math.round((row.current / row.threshold) * 100))
        : 0,
      earned: row.earned,
    })),
  };
}

export function feedbackFromResult(result: RespondResultDoc): FeedbackView {
  return buildFeedbackView(result.breakdown, result.messages, result.new_badges);
}
