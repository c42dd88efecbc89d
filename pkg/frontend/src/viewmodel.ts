/** The session view model: server truth plus UI-only state.
 *
 * Derived cells are never editable and never recomputed client-side; the
 * only way this state changes the server is through API calls, and every
 * mutation waits for the authoritative response before rendering.
 */

import type { ApiErrorBody, ChartVariant, RecordPayload, SessionPayload } from "./types.js";

export interface InputBuffer {
  AA: string;
  Aa: string;
  aa: string;
  note: string;
}

export interface ViewState {
  session: SessionPayload | null;
  chartVariant: ChartVariant;
  overlay: boolean;
  input: InputBuffer;
  fieldErrors: Record<string, string>;
  /** API error text, rendered verbatim. */
  errorMessage: string | null;
  /** Non-blocking banner, e.g. conservation warnings. */
  banner: string | null;
}

export function emptyInput(): InputBuffer {
  return { AA: "", Aa: "", aa: "", note: "" };
}

export function initialState(): ViewState {
  return {
    session: null,
    chartVariant: "line_graph",
    overlay: false,
    input: emptyInput(),
    fieldErrors: {},
    errorMessage: null,
    banner: null,
  };
}

export function withSession(state: ViewState, session: SessionPayload): ViewState {
  return { ...state, session, fieldErrors: {}, errorMessage: null };
}

export function withEntryAccepted(
  state: ViewState,
  record: RecordPayload,
  session: SessionPayload,
): ViewState {
  return {
    ...state,
    session,
    input: emptyInput(),
    fieldErrors: {},
    errorMessage: null,
    banner: record.warnings.length > 0 ? record.warnings.join(" ") : null,
  };
}

export function withApiError(state: ViewState, error: ApiErrorBody): ViewState {
  if (error.fields && Object.keys(error.fields).length > 0) {
    return { ...state, fieldErrors: { ...error.fields }, errorMessage: null };
  }
  return { ...state, fieldErrors: {}, errorMessage: error.message };
}

export function withChartVariant(state: ViewState, variant: ChartVariant): ViewState {
  return { ...state, chartVariant: variant };
}

export function withInput(state: ViewState, patch: Partial<InputBuffer>): ViewState {
  return { ...state, input: { ...state.input, ...patch } };
}

/** The pending (next) generation is the only editable row. */
export function editableGeneration(session: SessionPayload): number | null {
  return session.terminal_status === null ? session.next_generation : null;
}

/** Parse the input buffer; returns field errors instead of guessing. */
export function parseCounts(
  input: InputBuffer,
): { counts: { AA: number; Aa: number; aa: number } } | { errors: Record<string, string> } {
  const errors: Record<string, string> = {};
  const parsed: Record<string, number> = {};
  for (const key of ["AA", "Aa", "aa"] as const) {
    const raw = input[key].trim();
    const value = Number(raw);
    if (raw === "" || !Number.isInteger(value) || value < 0) {
      errors[key] = "enter a whole number of individuals";
    } else {
      parsed[key] = value;
    }
  }
  if (Object.keys(errors).length > 0) {
    return { errors };
  }
  return { counts: { AA: parsed["AA"]!, Aa: parsed["Aa"]!, aa: parsed["aa"]! } };
}
