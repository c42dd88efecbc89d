"""
A classroom session end to end
==============================

Sessions mechanize the web-page ledgers: students type genotype tallies
into the highlighted rows, every derived column fills itself in, charts
are built in three presentations, and the whole ledger exports to CSV.
"""

import json

from popgenlab import (
    ExperimentKind,
    GenotypeCounts,
    auto_step,
    chart_series,
    create_session,
    export_csv,
    record_manual_counts,
    session_from_document,
    session_to_document,
)
from popgenlab.protocols import instructions_for

session = create_session(ExperimentKind.IDEAL_SQRT, n=50, seed=99)
print("protocol shown to the class:")
for i, step in enumerate(instructions_for(session.kind), start=1):
    print(f"  {i}. {step}")

# Generation 0 is tallied by hand from the chips.
record = record_manual_counts(session, 0, GenotypeCounts(12, 26, 12), note="parent generation")
print(f"\ngen 0 entered: p_sqrt = {record.derived.sqrt.p:.4f}, residual = {record.derived.sqrt.residual:.4f}")

# A miscounted row is accepted but flagged, the tool teaches instead of blocking.
record = record_manual_counts(session, 1, GenotypeCounts(14, 24, 12))
print(f"gen 1 entered with a miscount: warnings = {record.warnings}")

# The engine can take over for the remaining generations.
for _ in range(3):
    auto_step(session)

chart = chart_series(session, "stacked_labeled")
print("\nstacked columns (labels rendered inside each segment):")
for column in chart.columns:
    segments = ", ".join(f"{seg.genotype}={seg.label}" for seg in column.segments)
    print(f"  gen {column.t}: {segments}")

chart = chart_series(session, "nested_columns")
print("\nnested columns (numbers appear on hover, widths grow with generation):")
panel = chart.panels[0]
for col in panel.columns:
    print(f"  width {col.width:.2f}  ->  {col.hover}")

print("\nCSV export (first three lines):")
for line in export_csv(session).decode().splitlines()[:3]:
    print(" ", line)

# Sessions persist losslessly, including the seed stream position.
document = session_to_document(session)
clone = session_from_document(json.loads(json.dumps(document)))
print(f"\nreloaded session equals the original: {clone == session}")
print(f"next auto-steps agree: {auto_step(clone) == auto_step(session)}")
