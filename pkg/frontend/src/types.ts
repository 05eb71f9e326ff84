// Mirrors the api-service JSON contract. The workbench never derives scores
// or ranks itself; these shapes are rendered as-is.

export type Origin = "reference" | "generated";

export interface SpecDocument {
  source_lang: string;
  target_lang: string;
  purpose: string;
  target_audience: string;
  target_locale?: string;
  register?: string;
  style_guide?: string;
}

export interface ReportEntry {
  label: string;
  text: string;
  origin: Origin;
  score: number;
  rank: number;
}

export interface RankedReport {
  source: string;
  entries: ReportEntry[];
  embed_model: string;
  score_precision: number;
}

export interface Selection {
  label: string;
  edited_text: string | null;
  selected_at: string;
}

export interface SessionRecord {
  session_id: string;
  created_at: string;
  spec: SpecDocument;
  segment: { id: string; text: string };
  strategy: { kind: string };
  candidates: Array<{ label: string; text: string; origin: Origin }>;
  report: RankedReport;
  selection: Selection | null;
  selection_history: Selection[];
  provider_meta: { chat_model: string; embed_model: string; mode: string };
}

export interface SessionIndexEntry {
  session_id: string;
  created_at: string;
  strategy: string;
  segment_text: string;
  selection_label: string | null;
}

export interface Reference {
  label: string;
  text: string;
}

export interface CreateSessionRequest {
  spec: SpecDocument;
  segment: { text: string };
  strategy: { kind: string };
  n: number;
  references: Reference[];
}
