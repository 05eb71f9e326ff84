import type { Origin, Reference, ReportEntry } from "./types.js";

/** Scores always display with the report's precision (3 decimals by default). */
export function formatScore(score: number, precision = 3): string {
  return score.toFixed(precision);
}

/**
 * Candidates sorted by rank ascending. Array.prototype.sort is stable, so
 * entries sharing a rank keep the server's order.
 */
export function sortByRank(entries: readonly ReportEntry[]): ReportEntry[] {
  return [...entries].sort((a, b) => a.rank - b.rank);
}

export function originBadge(origin: Origin): string {
  return origin === "reference" ? "REF" : "GEN";
}

/** The substitution frame must contain the {ENTITY} slot exactly once. */
export const ENTITY_SLOT = "{ENTITY}";

export function frameSlotCount(frame: string): number {
  return frame.split(ENTITY_SLOT).length - 1;
}

/** One entity per line; blank lines are skipped. */
export function parseEntities(raw: string): string[] {
  return raw
    .split("\n")
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
}

/**
 * References arrive as a JSON array of {label, text}. Returns null when the
 * text is not valid JSON in that shape (the form shows an inline error).
 */
export function parseReferences(raw: string): Reference[] | null {
  const trimmed = raw.trim();
  if (!trimmed) return [];
  let data: unknown;
  try {
    data = JSON.parse(trimmed);
  } catch {
    return null;
  }
  if (!Array.isArray(data)) return null;
  const references: Reference[] = [];
  for (const item of data) {
    if (
      typeof item !== "object" ||
      item === null ||
      typeof (item as Reference).label !== "string" ||
      typeof (item as Reference).text !== "string"
    ) {
      return null;
    }
    references.push({ label: (item as Reference).label, text: (item as Reference).text });
  }
  return references;
}
