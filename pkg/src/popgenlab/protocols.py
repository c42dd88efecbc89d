"""Step-by-step protocol text shown alongside each experiment's ledger.

The chip experiments assume the standard classroom kit: 100 allele tokens
(chips, checkers or beads in two colours) making a population of 50
individuals. The automated experiment needs no physical models at all.
"""

from __future__ import annotations

from .engine import ExperimentKind

_CHIP_SETUP = (
    "Prepare 100 allele tokens in two colours (one colour per allele) so the "
    "population holds 50 individuals; set the starting mix to the genotype "
    "ratio you want to study.",
    "Mix all tokens face down, then draw them two at a time without looking; "
    "each drawn pair is one offspring individual.",
    "Tally the drawn pairs: same-colour dominant pairs are AA, mixed pairs "
    "are Aa, same-colour recessive pairs are aa.",
    "Enter the three tallies into the highlighted row of the table; the "
    "frequency and chi-square cells fill in automatically.",
)

_CHIP_REPEAT = (
    "Return all tokens to the pool and repeat the draw for the next "
    "generation, entering each tally in its own row.",
    "Open the charts and compare the generations, then write down what "
    "happened to the allele and genotype frequencies.",
)

PROTOCOLS: dict[ExperimentKind, tuple[str, ...]] = {
    ExperimentKind.IDEAL_SQRT: _CHIP_SETUP
    + (
        "This page estimates allele frequencies by taking square roots of the "
        "homozygote frequencies; watch the residual column, it shows how far "
        "the tally sits from equilibrium proportions.",
    )
    + _CHIP_REPEAT,
    ExperimentKind.IDEAL_COUNTING: _CHIP_SETUP
    + (
        "This page estimates allele frequencies by gene counting, "
        "p = (AA + Aa/2) / N, so p + q is always exactly 1.",
    )
    + _CHIP_REPEAT,
    ExperimentKind.SELECTION: _CHIP_SETUP
    + (
        "Before entering a generation, remove individuals according to the "
        "fitness of their genotype (for example, remove every aa pair to "
        "model a lethal recessive); the row may hold fewer than 50 "
        "individuals after culling.",
    )
    + _CHIP_REPEAT,
    ExperimentKind.GENE_FLOW: _CHIP_SETUP
    + (
        "Each generation, swap the configured share of tokens with the "
        "migrant pool (its own allele mix) before drawing pairs.",
    )
    + _CHIP_REPEAT,
    ExperimentKind.DRIFT: _CHIP_SETUP
    + (
        "Draw pairs WITH replacement: after recording each offspring, return "
        "its two tokens to the pool and mix again, so a small population can "
        "lose an allele entirely.",
    )
    + _CHIP_REPEAT,
    ExperimentKind.AUTOMATED: (
        "No physical models are needed for this experiment.",
        "Enter the population size and the starting frequency of the "
        "dominant allele.",
        "Step the model one generation at a time; every row, chart and test "
        "is computed for you.",
        "Compare the outcome with your chip experiments: a large (here, "
        "idealized) population keeps its genetic structure indefinitely.",
    ),
}

#: Original page slots, for labeling only.
PAGE_LABELS: dict[ExperimentKind, str] = {
    ExperimentKind.IDEAL_SQRT: "exp1",
    ExperimentKind.IDEAL_COUNTING: "exp2",
    ExperimentKind.SELECTION: "exp3",
    ExperimentKind.GENE_FLOW: "exp4",
    ExperimentKind.DRIFT: "exp5",
    ExperimentKind.AUTOMATED: "exp6",
}

TITLES: dict[ExperimentKind, str] = {
    ExperimentKind.IDEAL_SQRT: "Ideal population (square-root method)",
    ExperimentKind.IDEAL_COUNTING: "Ideal population (gene-counting method)",
    ExperimentKind.SELECTION: "Natural selection",
    ExperimentKind.GENE_FLOW: "Gene flow",
    ExperimentKind.DRIFT: "Genetic drift",
    ExperimentKind.AUTOMATED: "Automated ideal population",
}


def instructions_for(kind: ExperimentKind) -> tuple[str, ...]:
    return PROTOCOLS[ExperimentKind(kind)]
