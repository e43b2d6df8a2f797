export interface SourceTerm {
  term_string: string;
  tty: string;
}

export interface Candidate {
  mcid: string;
  preferred_term: string;
  score: number;
  top_types: string[];
}

export interface ReviewTask {
  pending_id: string;
  source_concept: {
    source_abbr: string;
    code_in_source: string;
    terms: SourceTerm[];
  };
  candidates: Candidate[];
  created_at: string;
}

export interface PendingPage {
  total_open: number;
  limit: number;
  offset: number;
  tasks: ReviewTask[];
}

export interface DecisionResult {
  pending_id: string;
  outcome: "merged_into" | "new_concept";
  mcid: string;
  added_maids: string[];
  duplicates: number;
}

export interface QueueStats {
  open: number;
  resolved: number;
  decisions_by_reviewer: Record<string, number>;
  coverage: { label: string; count: number }[];
  untyped: number;
}

/** Exactly one of a candidate or reject-all must be selected to submit. */
export type Selection =
  | { kind: "candidate"; mcid: string }
  | { kind: "reject_all" }
  | null;
