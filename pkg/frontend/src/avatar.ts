/**
 * Email-hash avatars: a deterministic colored-initial SVG per address, plus
 * support for user-uploaded images (stored as data URIs in the profile).
 */

export function emailHash(email: string): number {
  // FNV-1a over the normalized address
  let hash = 0x811c9dc5;
  for (const ch of email.trim().toLowerCase()) {
    hash ^= ch.codePointAt(0)!;
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

export function generatedAvatar(seedText: string): string {
  const hash = emailHash(seedText);
  const hue = hash % 360;
  const initial = (seedText.trim()[0] ?? "?").toUpperCase();
  const svg =
    `<svg xmlns="http://www.w3.org/2000/svg" width="64" height="64">` +
    `<rect width="64" height="64" rx="8" fill="hsl(${hue},35%,82%)"/>` +
    `<text x="32" y="42" font-size="30" text-anchor="middle" ` +
    `fill="hsl(${hue},45%,30%)" font-family="sans-serif">${initial}</text></svg>`;
  return `data:image/svg+xml;utf8,${encodeURIComponent(svg)}`;
}

export function avatarFor(avatar: string | null, emailOrName: string): string {
  return avatar && avatar.length > 0 ? avatar : generatedAvatar(emailOrName);
}
