#!/usr/bin/env python3
"""Record live service responses into the frontend replay fixtures.

Run from the repository root after changing the service or the corpora:

    python3 frontend/scripts/record_fixtures.py

Produces tests/fixtures/session_replay.json (the scripted labeling
session) and tests/fixtures/table3_query.json (the extraction showcase
record as the service delivers it).
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from recipeforge.corpus import read_records
from recipeforge.extraction import build_gazetteer, extend_corpus
from recipeforge.service import create_app
from recipeforge.synthetic import (
    SyntheticCorpusSpec,
    gen_synthetic,
    make_annotation_pool,
)

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# the genres the scripted annotator clicks, in order
CLICKS = [4, 2, 7]


def record_session_replay() -> None:
    records = gen_synthetic(
        SyntheticCorpusSpec(per_genre=2, mixing_rate=0.6, seed=17)
    )
    session_records, _ = make_annotation_pool(records, 1)
    client = TestClient(create_app({"synthetic": session_records}))
    calls = []

    def call(method: str, path: str, body=None):
        if method == "GET":
            response = client.get(path)
        else:
            response = client.post(path, json=body)
        entry = {"method": method, "path": path, "status":
                 response.status_code, "response": response.json()}
        if body is not None:
            entry["body"] = body
        calls.append(entry)
        return response.json()

    created = call("POST", "/v1/sessions", {
        "corpus": "synthetic", "feature": "title-ner", "tau": 0.99,
        "batch": 3, "seed": 0,
    })
    sid = created["session_id"]
    # the controller refreshes (next + metrics) after session creation and
    # after every accepted label; the third label exhausts the batch and
    # auto-triggers the round
    call("GET", f"/v1/sessions/{sid}/next")
    call("GET", f"/v1/sessions/{sid}/metrics")
    for i, genre_id in enumerate(CLICKS):
        head = calls[-2]["response"]["record"]
        out = call("POST", f"/v1/sessions/{sid}/label", {
            "record_id": head["record_id"], "label": genre_id,
        })
        if i < len(CLICKS) - 1:
            assert out["remaining_in_batch"] > 0
            call("GET", f"/v1/sessions/{sid}/next")
            call("GET", f"/v1/sessions/{sid}/metrics")
        else:
            assert out["remaining_in_batch"] == 0
    call("POST", f"/v1/sessions/{sid}/round")
    call("GET", f"/v1/sessions/{sid}/next")
    call("GET", f"/v1/sessions/{sid}/metrics")

    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "session_replay.json").write_text(
        json.dumps({"clicks": CLICKS, "calls": calls}, indent=2) + "\n",
        encoding="utf-8",
    )
    print(f"session replay: {len(calls)} calls")


def record_table3_query() -> None:
    seeds = gen_synthetic(SyntheticCorpusSpec(per_genre=1, seed=3))
    for i, record in enumerate(seeds):
        record.record_id = 100 + i
    pancake = read_records("data/oven_pancake.rec")
    pool, _ = make_annotation_pool(pancake, 0)  # strip the label
    corpus = extend_corpus(pool + seeds, build_gazetteer(pool + seeds))
    client = TestClient(create_app({"fixture": corpus}))
    sid = client.post("/v1/sessions", json={
        "corpus": "fixture", "feature": "title", "batch": 1, "seed": 0,
    }).json()["session_id"]
    payload = client.get(f"/v1/sessions/{sid}/next").json()
    assert payload["record"]["title"].startswith("Pannu Kakku")
    assert len(payload["record"]["extended_ner"]) == 10
    (FIXTURES / "table3_query.json").write_text(
        json.dumps(payload, indent=2) + "\n", encoding="utf-8"
    )
    print("extraction showcase record captured")


if __name__ == "__main__":
    record_session_replay()
    record_table3_query()
