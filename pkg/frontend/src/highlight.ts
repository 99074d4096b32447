/**
 * Inline entity highlighting for direction text.
 *
 * Surfaces are matched case-insensitively on word-ish boundaries, longest
 * surface first so multi-word entities beat their sub-words, and claimed
 * ranges never overlap.  Entities whose surface also sits in the source
 * ingredient list get the "source" style, newly extracted ones "extracted".
 */

interface Claim {
  start: number;
  end: number;
  source: boolean;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function isWordChar(ch: string | undefined): boolean {
  return ch !== undefined && /[A-Za-z0-9]/.test(ch);
}

function findClaims(
  text: string,
  entities: readonly string[],
  sourceKeys: ReadonlySet<string>,
): Claim[] {
  const lowered = text.toLowerCase();
  const claims: Claim[] = [];
  const ordered = [...entities].sort((a, b) => b.length - a.length);
  for (const surface of ordered) {
    const needle = surface.toLowerCase();
    if (!needle) continue;
    let from = 0;
    while (from <= lowered.length - needle.length) {
      const start = lowered.indexOf(needle, from);
      if (start === -1) break;
      const end = start + needle.length;
      const clean =
        !isWordChar(text[start - 1]) &&
        !isWordChar(text[end]) &&
        !claims.some((c) => start < c.end && end > c.start);
      if (clean) {
        claims.push({ start, end, source: sourceKeys.has(needle) });
      }
      from = start + 1;
    }
  }
  return claims.sort((a, b) => a.start - b.start);
}

export function highlightEntities(
  text: string,
  entities: readonly string[],
  sourceEntities: readonly string[] = [],
): string {
  const sourceKeys = new Set(sourceEntities.map((s) => s.toLowerCase()));
  const claims = findClaims(text, entities, sourceKeys);
  const parts: string[] = [];
  let cursor = 0;
  for (const claim of claims) {
    parts.push(escapeHtml(text.slice(cursor, claim.start)));
    const cls = claim.source ? 'entity source' : 'entity extracted';
    parts.push(
      `<mark class="${cls}">${escapeHtml(text.slice(claim.start, claim.end))}</mark>`,
    );
    cursor = claim.end;
  }
  parts.push(escapeHtml(text.slice(cursor)));
  return parts.join('');
}

/** Chip markup for the full extended entity list, every entry marked. */
export function entityChips(
  entities: readonly string[],
  sourceEntities: readonly string[] = [],
): string {
  const sourceKeys = new Set(sourceEntities.map((s) => s.toLowerCase()));
  return entities
    .map((surface) => {
      const cls = sourceKeys.has(surface.toLowerCase())
        ? 'entity source'
        : 'entity extracted';
      return `<mark class="${cls}">${escapeHtml(surface)}</mark>`;
    })
    .join(' ');
}
