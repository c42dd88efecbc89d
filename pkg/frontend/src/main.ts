/** Lab UI bootstrap: hash-routed single page over the session API.
 *
 * Routes: #/ (experiment chooser), #/new/<kind> (parameter form),
 * #/session/<id> (ledger + charts; shareable, one experiment per URL).
 */

import { ApiRequestError, LabApi } from "./api.js";
import {
  buildLineGraph,
  buildNested,
  buildOverlay,
  buildStacked,
  DEFAULT_SIZE,
  type LineShape,
  type RectShape,
  type TextShape,
} from "./charts.js";
import { APP_TAGLINE, APP_TITLE, CHART_VARIANTS, EXPERIMENTS, LABELS } from "./copy.js";
import { LEDGER_COLUMNS, ledgerRow } from "./table.js";
import type { ChartPayload, ChartVariant, ExperimentKind, SessionPayload } from "./types.js";
import {
  editableGeneration,
  emptyInput,
  initialState,
  parseCounts,
  withApiError,
  withChartVariant,
  withEntryAccepted,
  withInput,
  withSession,
  type ViewState,
} from "./viewmodel.js";

const api = new LabApi("");
let state: ViewState = initialState();
let chart: ChartPayload | null = null;

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: Array<Node | string> = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

function svgEl(tag: string, attrs: Record<string, string> = {}): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

function setState(next: ViewState): void {
  state = next;
  render();
}

// ---------------------------------------------------------------------------
// Wizard: pick an experiment, fill its parameter form
// ---------------------------------------------------------------------------

function renderChooser(root: HTMLElement): void {
  root.append(
    el("h1", {}, [APP_TITLE]),
    el("p", { class: "tagline" }, [APP_TAGLINE]),
    el(
      "div",
      { class: "cards" },
      EXPERIMENTS.map((exp) =>
        el("a", { class: "card", href: `#/new/${exp.kind}` }, [
          el("h2", {}, [exp.title]),
          el("p", {}, [exp.blurb]),
        ]),
      ),
    ),
  );
}

function numberField(
  name: string,
  label: string,
  value: string,
  step = "any",
): HTMLElement {
  const error = state.fieldErrors[name];
  return el("label", { class: "field" + (error ? " field-error" : ""), "data-field": name }, [
    el("span", {}, [label]),
    el("input", { name, value, step, type: "number" }),
    el("span", { class: "inline-error" }, [error ?? ""]),
  ]);
}

function renderForm(root: HTMLElement, kind: ExperimentKind): void {
  const exp = EXPERIMENTS.find((e) => e.kind === kind);
  if (!exp) {
    location.hash = "#/";
    return;
  }
  const fields: HTMLElement[] = [numberField("n", LABELS.populationSize, "50", "1")];
  if (kind === "selection") {
    LABELS.fitness.forEach((label, i) => {
      fields.push(numberField(`fitness.${["wAA", "wAa", "waa"][i]}`, label, "1"));
    });
  }
  if (kind === "gene_flow") {
    fields.push(numberField("migration_rate", LABELS.migrationRate, "0.1"));
    fields.push(numberField("migrant_freq", LABELS.migrantFreq, "0.5"));
  }
  if (kind === "automated") {
    fields.push(numberField("p0", LABELS.p0, "0.5"));
  }
  fields.push(numberField("seed", LABELS.seed, ""));

  const form = el("form", { class: "params" }, [
    ...fields,
    el("p", { class: "error-message" }, [state.errorMessage ?? ""]),
    el("button", { type: "submit" }, [LABELS.start]),
    el("a", { href: "#/", class: "back" }, [LABELS.back]),
  ]);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void submitForm(kind, new FormData(form));
  });
  root.append(el("h1", {}, [exp.title]), form);
}

async function submitForm(kind: ExperimentKind, data: FormData): Promise<void> {
  const num = (name: string): number | undefined => {
    const raw = (data.get(name) as string | null)?.trim();
    return raw ? Number(raw) : undefined;
  };
  const body: Record<string, unknown> = { kind, n: num("n") ?? 50 };
  if (kind === "selection") {
    body["fitness"] = [
      num("fitness.wAA") ?? 1,
      num("fitness.wAa") ?? 1,
      num("fitness.waa") ?? 1,
    ];
  }
  if (kind === "gene_flow") {
    body["migration_rate"] = num("migration_rate") ?? 0;
    body["migrant_freq"] = num("migrant_freq") ?? 0.5;
  }
  if (kind === "automated") {
    body["p0"] = num("p0") ?? 0.5;
  }
  const seed = num("seed");
  if (seed !== undefined) {
    body["seed"] = seed;
  }
  try {
    const session = await api.createSession(body as never);
    chart = null;
    setState(withSession({ ...state, input: emptyInput(), banner: null }, session));
    location.hash = `#/session/${session.id}`;
  } catch (error) {
    handleApiError(error);
  }
}

// ---------------------------------------------------------------------------
// Session view: instructions, ledger, charts
// ---------------------------------------------------------------------------

function renderInstructions(session: SessionPayload): HTMLElement {
  return el("details", { class: "instructions", open: "" }, [
    el("summary", {}, ["Protocol"]),
    el(
      "ol",
      {},
      session.instructions.map((step, i) =>
        el("li", { class: i === session.instruction_step ? "current-step" : "" }, [step]),
      ),
    ),
  ]);
}

function renderLedger(session: SessionPayload): HTMLElement {
  const head = el(
    "tr",
    {},
    LEDGER_COLUMNS.map((name) => el("th", {}, [name])),
  );
  const body: HTMLElement[] = session.records.map((record) =>
    el(
      "tr",
      { class: record.source === "manual" ? "row-manual" : "row-automatic" },
      ledgerRow(record).map((cell) => el("td", { class: `cell-${cell.role}` }, [cell.text])),
    ),
  );

  const pending = editableGeneration(session);
  if (pending !== null) {
    const inputCell = (name: "AA" | "Aa" | "aa"): HTMLElement => {
      const error = state.fieldErrors[name];
      return el("td", { class: "cell-editable" + (error ? " field-error" : "") }, [
        el("input", {
          name,
          value: state.input[name],
          inputmode: "numeric",
          "aria-label": `count of ${name}`,
        }),
      ]);
    };
    const noteCell = el("td", { class: "cell-editable" }, [
      el("input", { name: "note", value: state.input.note, placeholder: LABELS.note }),
    ]);
    const row = el("tr", { class: "row-editable", "data-generation": String(pending) }, [
      el("td", {}, [String(pending)]),
      inputCell("AA"),
      inputCell("Aa"),
      inputCell("aa"),
      ...LEDGER_COLUMNS.slice(4, 15).map(() => el("td", { class: "cell-derived" }, ["·"])),
      el("td", {}, ["manual"]),
      noteCell,
    ]);
    row.addEventListener("input", (event) => {
      const target = event.target as HTMLInputElement;
      state = withInput(state, { [target.name]: target.value });
    });
    body.push(row);
  }

  return el("table", { class: "ledger" }, [head, ...body]);
}

function renderChartArea(session: SessionPayload): HTMLElement {
  const toggles = el(
    "div",
    { class: "chart-toggles" },
    CHART_VARIANTS.map(({ variant, label }) => {
      const button = el(
        "button",
        {
          type: "button",
          class: state.chartVariant === variant ? "active" : "",
          "data-variant": variant,
        },
        [label],
      );
      button.addEventListener("click", () => {
        setState(withChartVariant(state, variant));
        void refreshChart(session.id);
      });
      return button;
    }),
  );
  const overlayToggle = el("label", { class: "overlay-toggle" }, [
    (() => {
      const box = el("input", { type: "checkbox" });
      (box as HTMLInputElement).checked = state.overlay;
      box.addEventListener("change", () => {
        setState({ ...state, overlay: (box as HTMLInputElement).checked });
      });
      return box;
    })(),
    LABELS.overlay,
  ]);
  const area = el("div", { class: "chart-area" }, [toggles, overlayToggle]);
  area.append(chart ? renderChartSvg(chart) : el("p", { class: "no-data" }, [LABELS.noData]));
  return area;
}

function appendRects(svg: SVGElement, rects: RectShape[]): void {
  for (const rect of rects) {
    const node = svgEl("rect", {
      x: String(rect.x),
      y: String(rect.y),
      width: String(rect.width),
      height: String(rect.height),
      fill: rect.fill,
    });
    const title = svgEl("title");
    title.textContent = rect.hover;
    node.append(title);
    svg.append(node);
  }
}

function appendLabels(svg: SVGElement, labels: TextShape[], cls: string): void {
  for (const label of labels) {
    const node = svgEl("text", {
      x: String(label.x),
      y: String(label.y),
      class: cls,
      "text-anchor": "middle",
    });
    node.textContent = label.text;
    svg.append(node);
  }
}

function appendLines(svg: SVGElement, lines: LineShape[]): void {
  for (const line of lines) {
    svg.append(
      svgEl("polyline", {
        points: line.points,
        fill: "none",
        stroke: line.color,
        "stroke-width": "2",
        "stroke-dasharray": line.dashed ? "5,4" : "",
        "data-series": line.name,
      }),
    );
  }
}

function renderChartSvg(payload: ChartPayload): SVGElement {
  const svg = svgEl("svg", {
    viewBox: `0 0 ${DEFAULT_SIZE.width} ${DEFAULT_SIZE.height}`,
    class: "chart",
    role: "img",
  });
  if (state.overlay || payload.variant === "stacked_labeled") {
    const overlay = state.overlay ? buildOverlay(payload) : null;
    const stacked = overlay ? overlay.stacked : buildStacked(payload);
    appendRects(svg, stacked.rects);
    if (payload.variant === "stacked_labeled") {
      appendLabels(svg, stacked.labels, "segment-label");
    }
    appendLabels(svg, stacked.axis, "axis-label");
    if (overlay) {
      appendLines(svg, overlay.lines);
    }
    return svg;
  }
  if (payload.variant === "nested_columns") {
    for (const panel of buildNested(payload)) {
      appendRects(svg, panel.bars);
      appendLabels(svg, [panel.caption], "axis-label");
    }
    return svg;
  }
  appendLines(svg, buildLineGraph(payload));
  return svg;
}

async function refreshChart(sessionId: string): Promise<void> {
  try {
    // Overlay draws the allele lines over the stacked columns, so it always
    // needs the stacked payload.
    const variant: ChartVariant = state.overlay ? "stacked_labeled" : state.chartVariant;
    chart = await api.chart(sessionId, variant);
    render();
  } catch (error) {
    if (error instanceof ApiRequestError && error.body.code === "no_data") {
      chart = null;
      render();
      return;
    }
    handleApiError(error);
  }
}

function renderSession(root: HTMLElement, session: SessionPayload): void {
  const exp = EXPERIMENTS.find((e) => e.kind === session.kind);
  root.append(
    el("h1", {}, [exp ? exp.title : session.kind]),
    el("p", { class: "session-meta" }, [
      `n = ${session.params.n} · seed ${session.params.seed} · ${session.params.mode} · headline estimator: ${session.headline_estimator}`,
    ]),
    renderInstructions(session),
  );
  if (state.banner) {
    root.append(el("div", { class: "banner" }, [state.banner]));
  }
  if (state.errorMessage) {
    root.append(el("div", { class: "error-message" }, [state.errorMessage]));
  }
  if (session.terminal_status) {
    root.append(el("div", { class: "terminal" }, [LABELS.terminal(session.terminal_status)]));
  }
  root.append(renderLedger(session));

  const actions = el("div", { class: "actions" }, []);
  if (editableGeneration(session) !== null) {
    const enter = el("button", { type: "button" }, [LABELS.enterRow]);
    enter.addEventListener("click", () => void submitCounts(session));
    actions.append(enter, el("span", { class: "hint" }, [LABELS.pendingRowHint]));
    if (session.records.length > 0) {
      const step = el("button", { type: "button", class: "secondary" }, [LABELS.autoStep]);
      step.addEventListener("click", () => void runAutoStep(session));
      actions.append(step);
    }
  }
  actions.append(
    el("a", { href: api.exportUrl(session.id), class: "export", download: "" }, [
      LABELS.exportCsv,
    ]),
  );
  root.append(actions, renderChartArea(session));
}

async function submitCounts(session: SessionPayload): Promise<void> {
  const parsed = parseCounts(state.input);
  if ("errors" in parsed) {
    setState({ ...state, fieldErrors: parsed.errors });
    return;
  }
  try {
    const result = await api.enterCounts(session.id, {
      ...parsed.counts,
      t: session.next_generation,
      note: state.input.note,
    });
    setState(withEntryAccepted(state, result.record, result.session));
    await refreshChart(session.id);
  } catch (error) {
    handleApiError(error);
  }
}

async function runAutoStep(session: SessionPayload): Promise<void> {
  try {
    const result = await api.autoStep(session.id);
    setState(withEntryAccepted(state, result.record, result.session));
    await refreshChart(session.id);
  } catch (error) {
    handleApiError(error);
  }
}

function handleApiError(error: unknown): void {
  if (error instanceof ApiRequestError) {
    setState(withApiError(state, error.body));
    return;
  }
  setState({ ...state, errorMessage: String(error) });
}

// ---------------------------------------------------------------------------
// Routing
// ---------------------------------------------------------------------------

function render(): void {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  root.replaceChildren();
  const hash = location.hash || "#/";
  const newMatch = /^#\/new\/([a-z_]+)$/.exec(hash);
  const sessionMatch = /^#\/session\/(.+)$/.exec(hash);
  if (newMatch) {
    renderForm(root, newMatch[1] as ExperimentKind);
  } else if (sessionMatch) {
    if (state.session && state.session.id === sessionMatch[1]) {
      renderSession(root, state.session);
    } else {
      root.append(el("p", {}, ["Loading session..."]));
      void loadSession(sessionMatch[1]!);
    }
  } else {
    renderChooser(root);
  }
}

async function loadSession(id: string): Promise<void> {
  try {
    const session = await api.fetchSession(id);
    setState(withSession(state, session));
    await refreshChart(id);
  } catch (error) {
    handleApiError(error);
    const root = document.getElementById("app");
    root?.append(el("p", { class: "error-message" }, [state.errorMessage ?? "not found"]));
  }
}

window.addEventListener("hashchange", () => {
  chart = null;
  state = { ...state, fieldErrors: {}, errorMessage: null, banner: null };
  const sessionMatch = /^#\/session\/(.+)$/.exec(location.hash);
  if (!sessionMatch || (state.session && state.session.id !== sessionMatch[1])) {
    state = { ...state, session: null, input: emptyInput() };
  }
  render();
});

render();
