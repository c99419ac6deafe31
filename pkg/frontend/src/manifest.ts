/**
 * Every static asset the client ships. Snippet audio/video arrive as part of
 * game payloads (remote media references), never as bundled assets, and the
 * client deliberately ships zero decorative sound.
 */

export type AssetKind =
  | "document"
  | "style"
  | "script"
  | "image"
  | "font"
  | "audio"
  | "video";

export interface AssetEntry {
  path: string;
  kind: AssetKind;
  purpose: string;
}

export const ASSET_MANIFEST: AssetEntry[] = [
  { path: "index.html", kind: "document", purpose: "app shell" },
  { path: "styles.css", kind: "style", purpose: "neutral-palette layout" },
  { path: "dist/app.js", kind: "script", purpose: "bundled client" },
];

/** Audio entries outside snippet playback; the design requires none. */
export function nonSnippetAudioAssets(
  manifest: AssetEntry[] = ASSET_MANIFEST,
): AssetEntry[] {
  return manifest.filter((entry) => entry.kind === "audio");
}
