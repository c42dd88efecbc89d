/** Wire types mirroring the session API payloads. The UI renders these
 * verbatim and computes nothing itself. */

export type ExperimentKind =
  | "ideal_sqrt"
  | "ideal_counting"
  | "selection"
  | "gene_flow"
  | "drift"
  | "automated";

export type ChartVariant = "line_graph" | "stacked_labeled" | "nested_columns";

export interface Counts {
  AA: number;
  Aa: number;
  aa: number;
}

export interface DerivedPayload {
  counting: { p: number; q: number };
  sqrt: { p: number; q: number; residual: number };
  genotype: { AA: number; Aa: number; aa: number };
  expected: { AA: number; Aa: number; aa: number };
  chi_square: {
    statistic: number;
    df: number;
    p_value: number;
    low_expected_warning: boolean;
    degenerate: boolean;
  };
}

export interface RecordPayload {
  t: number;
  source: "manual" | "automatic";
  counts: Counts;
  n: number;
  note: string;
  warnings: string[];
  terminal_status: string | null;
  derived: DerivedPayload | null;
}

export interface SessionParams {
  n: number;
  fitness: number[];
  migration_rate: number;
  migrant_freq: number;
  generations: number;
  seed: number;
  mode: string;
  p0: number | null;
}

export interface SessionPayload {
  id: string;
  kind: ExperimentKind;
  headline_estimator: "sqrt" | "counting";
  params: SessionParams;
  created_at: string;
  updated_at: string;
  instruction_step: number;
  instructions: string[];
  next_generation: number;
  terminal_status: string | null;
  records: RecordPayload[];
}

export interface ChartSegmentPayload {
  genotype: string;
  value: number;
  label: string;
}

export interface ChartColumnPayload {
  t: number;
  segments: ChartSegmentPayload[];
}

export interface NestedColumnPayload {
  t: number;
  value: number;
  width: number;
  hover: string;
}

export interface NestedPanelPayload {
  genotype: string;
  columns: NestedColumnPayload[];
}

export interface ChartPayload {
  variant: ChartVariant;
  generations: number[];
  p: number[];
  q: number[];
  genotype_series: { AA: number[]; Aa: number[]; aa: number[] };
  columns: ChartColumnPayload[];
  panels: NestedPanelPayload[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  fields?: Record<string, string>;
  detail?: unknown;
}
