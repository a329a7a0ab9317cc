// Wire types mirroring the service's JSON bodies. The UI never derives
// scores itself; everything rendered traces back to these responses.

export interface Metrics {
  ef: number;
  ep: number;
  nf: number;
  np: number;
}

export interface RankingEntry {
  element: number;
  name: string;
  kind: string;
  path: string;
  start_line: number;
  end_line: number;
  parent: number | null;
  score: number;
  rank: number;
  tie_group: number;
  metrics: Metrics;
  color: [number, number, number];
}

export interface RankingResponse {
  version: string;
  formula: string;
  granularity: string;
  tiebreak: string;
  no_failing_tests: boolean;
  total_entries: number;
  entries: RankingEntry[];
  session_id: string;
  session_granularity: string;
  concluded: boolean;
  dirty: boolean;
  available_granularities: string[];
  skipped_actions?: { seq: number; element: number; verdict: string }[];
}

export interface ExplanationResponse {
  element: number;
  name: string;
  path: string;
  start_line: number;
  end_line: number;
  metrics: Metrics;
  formula: string;
  trace: string;
  score: number;
  failing_tests: { id: number; name: string }[];
  passing_covering: number;
}

export type Verdict = "NOT_FAULTY" | "SUSPICIOUS_CONTEXT" | "FAULT_FOUND";

export type ColorMode = "STANDARD" | "HIGH_CONTRAST";
