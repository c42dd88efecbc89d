"""Record a scripted exp1 walkthrough against the real API into a fixture.

The UI contract tests replay this fixture: every value they render must be
byte-equal to what the API returned here. Regenerate with:

    python frontend/scripts/record_exp1_fixture.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from popgenlab.service import create_app

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "exp1_walkthrough.json"

client = TestClient(create_app())

created = client.post(
    "/api/sessions", json={"kind": "ideal_sqrt", "n": 50, "seed": 20240915}
)
created.raise_for_status()
sid = created.json()["session"]["id"]

steps = []
entry = client.post(
    f"/api/sessions/{sid}/generations",
    json={"AA": 12, "Aa": 26, "aa": 12, "note": "parent generation"},
)
entry.raise_for_status()
steps.append({"op": "enter", "response": entry.json()})

miscount = client.post(
    f"/api/sessions/{sid}/generations", json={"AA": 14, "Aa": 24, "aa": 12}
)
miscount.raise_for_status()
steps.append({"op": "enter", "response": miscount.json()})

for _ in range(3):
    stepped = client.post(f"/api/sessions/{sid}/auto-step")
    stepped.raise_for_status()
    steps.append({"op": "auto_step", "response": stepped.json()})

charts = {}
for variant in ("line_graph", "stacked_labeled", "nested_columns"):
    resp = client.get(f"/api/sessions/{sid}/charts", params={"variant": variant})
    resp.raise_for_status()
    charts[variant] = resp.json()["chart"]

final = client.get(f"/api/sessions/{sid}")
final.raise_for_status()

wrong_total = client.post(
    f"/api/sessions/{sid}/generations", json={"AA": 1, "Aa": 1, "aa": 1}
)

OUT.parent.mkdir(parents=True, exist_ok=True)
OUT.write_text(
    json.dumps(
        {
            "session": final.json()["session"],
            "steps": steps,
            "charts": charts,
            "wrong_total_error": {
                "status": wrong_total.status_code,
                "body": wrong_total.json(),
            },
        },
        indent=2,
    ),
    encoding="utf-8",
)
print(f"wrote {OUT}")
