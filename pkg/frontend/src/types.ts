/**
 * Shapes of the /v1 annotation API responses and the nine genre labels.
 */

export interface GenreEntry {
  id: number;
  name: string;
}

// Fixed taxonomy, in label-id order; buttons and shortcuts follow it.
export const GENRES: readonly GenreEntry[] = [
  { id: 1, name: 'Bakery' },
  { id: 2, name: 'Drinks' },
  { id: 3, name: 'NonVeg' },
  { id: 4, name: 'Vegetables' },
  { id: 5, name: 'FastFood' },
  { id: 6, name: 'Cereal' },
  { id: 7, name: 'Meal' },
  { id: 8, name: 'Sides' },
  { id: 9, name: 'Fusion' },
];

export interface CommitteeVote {
  member: string;
  genre: string;
  label: number;
}

export interface QueryRecord {
  record_id: number;
  title: string;
  directions: string[];
  ner: string[];
  extended_ner: string[];
  committee_votes: CommitteeVote[];
  vote_entropy: number;
}

export interface NextResponse {
  record: QueryRecord | null;
  remaining_in_batch: number;
  pool_remaining: number;
  pool_empty: boolean;
}

export interface LabelResponse {
  accepted: boolean;
  remaining_in_batch: number;
  detail?: string;
}

export interface RoundResponse {
  round: number;
  auto_labeled: number;
  queried: number[];
  pool_remaining: number;
}

export interface MetricsResponse {
  human: number;
  machine: number;
  pool_remaining: number;
  rounds: number;
  committee_agreement: number;
}

export interface SessionOptions {
  corpus: string;
  feature?: string;
  tau?: number;
  batch?: number;
  seed?: number;
}
