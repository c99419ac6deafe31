/** Replayable tutorial content; reachable from the nav on every screen. */

export interface TutorialStep {
  title: string;
  body: string;
}

export const TUTORIAL_STEPS: TutorialStep[] = [
  {
    title: "Welcome",
    body: "You will see short text, audio, or video snippets. Your job: say " +
      "which mood each one conveys, in your own words.",
  },
  {
    title: "Mood check first",
    body: "Every game starts with a 1-to-5 scale about how you feel right " +
      "now. It takes one tap and helps make sense of the labels you give.",
  },
  {
    title: "Label the snippet",
    body: "Read, listen to, or watch the snippet, then type a mood word. " +
      "Short words work best. For audio and video, start playback before " +
      "answering — replay as often as you like.",
  },
  {
    title: "Scoring",
    body: "A brand-new label earns 100 base points. Every player who already " +
      "gave the same label adds bonus points, and very popular labels " +
      "unlock multipliers — so try to think like other players.",
  },
  {
    title: "Badges and ranks",
    body: "Playing earns badges, and your total score sets your rank on the " +
      "leaderboard. You can hide yourself from public boards in your profile.",
  },
  {
    title: "Play at your pace",
    body: "There is no timer. Exit whenever you like; your game is summed up " +
      "and your rank updated. Revisit this tutorial any time from the menu.",
  },
];
