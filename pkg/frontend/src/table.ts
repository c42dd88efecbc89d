/** Ledger table cells, built verbatim from API payloads.
 *
 * The thin-client contract: every derived cell's text is String(value) of
 * the number exactly as the API delivered it. No rounding, no arithmetic;
 * if the presentation ever needs shortening it must come from the server.
 */

import type { RecordPayload } from "./types.js";

export interface LedgerCell {
  text: string;
  /** "count" for tallies, "derived" for computed cells, "meta" otherwise. */
  role: "count" | "derived" | "meta";
}

export const LEDGER_COLUMNS = [
  "t",
  "AA",
  "Aa",
  "aa",
  "N",
  "p (counting)",
  "q (counting)",
  "p (sqrt)",
  "q (sqrt)",
  "residual",
  "fAA",
  "fAa",
  "faa",
  "chi2",
  "p-value",
  "source",
  "note",
] as const;

export function verbatim(value: number): string {
  return String(value);
}

export function ledgerRow(record: RecordPayload): LedgerCell[] {
  const d = record.derived;
  const derived = (value: number | undefined): LedgerCell => ({
    text: value === undefined ? "" : verbatim(value),
    role: "derived",
  });
  return [
    { text: String(record.t), role: "meta" },
    { text: String(record.counts.AA), role: "count" },
    { text: String(record.counts.Aa), role: "count" },
    { text: String(record.counts.aa), role: "count" },
    { text: String(record.n), role: "meta" },
    derived(d?.counting.p),
    derived(d?.counting.q),
    derived(d?.sqrt.p),
    derived(d?.sqrt.q),
    derived(d?.sqrt.residual),
    derived(d?.genotype.AA),
    derived(d?.genotype.Aa),
    derived(d?.genotype.aa),
    derived(d?.chi_square.statistic),
    derived(d?.chi_square.p_value),
    { text: record.source, role: "meta" },
    { text: record.note, role: "meta" },
  ];
}
