/** All user-facing copy in one place so it can be translated wholesale. */

import type { ChartVariant, ExperimentKind } from "./types.js";

export const APP_TITLE = "Population genetics lab";
export const APP_TAGLINE =
  "Six model experiments on the genetic structure of populations";

export const EXPERIMENTS: Array<{
  kind: ExperimentKind;
  title: string;
  blurb: string;
}> = [
  {
    kind: "ideal_sqrt",
    title: "1 · Ideal population (square-root method)",
    blurb:
      "Shuffle and pair 100 allele tokens; frequencies come from square roots of the homozygote shares.",
  },
  {
    kind: "ideal_counting",
    title: "2 · Ideal population (gene counting)",
    blurb:
      "The same chip protocol, with frequencies from the exact census p = (D + H/2) / N.",
  },
  {
    kind: "selection",
    title: "3 · Natural selection",
    blurb: "Cull genotypes by fitness before each mating round.",
  },
  {
    kind: "gene_flow",
    title: "4 · Gene flow",
    blurb: "Swap a share of the gene pool with a migrant population each generation.",
  },
  {
    kind: "drift",
    title: "5 · Genetic drift",
    blurb: "Draw pairs with replacement; small populations lose alleles by chance.",
  },
  {
    kind: "automated",
    title: "6 · Automated ideal population",
    blurb: "No physical models: enter a size and a starting frequency, step the model.",
  },
];

export const CHART_VARIANTS: Array<{ variant: ChartVariant; label: string }> = [
  { variant: "line_graph", label: "Line graph" },
  { variant: "stacked_labeled", label: "Stacked columns (labeled)" },
  { variant: "nested_columns", label: "Nested columns (hover)" },
];

export const LABELS = {
  populationSize: "Population size n",
  seed: "Seed (blank = random)",
  generationsPlanned: "Planned generations",
  fitness: ["Fitness wAA", "Fitness wAa", "Fitness waa"],
  migrationRate: "Migration rate m",
  migrantFreq: "Migrant frequency pm",
  p0: "Starting frequency p0",
  mode: "Mode",
  start: "Start experiment",
  back: "Back to experiments",
  enterRow: "Enter generation",
  autoStep: "Let the engine step",
  exportCsv: "Download CSV",
  overlay: "Overlay allele-frequency lines",
  note: "Note",
  pendingRowHint: "Fill the highlighted row from your tally, then press Enter generation.",
  terminal: (status: string) => `The population reached a terminal state: ${status}.`,
  noData: "No data yet. Enter generation 0 to see the charts.",
};
