#!/usr/bin/env python3
"""Record API responses from the backend's synthetic survey as JSON fixtures.

Run from the repository root after backend changes:

    python3 frontend/scripts/record_fixtures.py

The UI contract tests replay these files through a mocked fetch, so every
number the client renders traces back to a recorded API body.
"""

import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parents[2]
sys.path.insert(0, str(ROOT / "tests"))

from conftest import write_modelacq_inputs  # noqa: E402
from surveyscope.cli import main  # noqa: E402
from surveyscope.service import ApiCore, ServiceState  # noqa: E402
from surveyscope.snapshot import load_snapshot  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def record():
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        base = pathlib.Path(tmp)
        paths = write_modelacq_inputs(base / "in")
        snap = base / "snap"
        assert main([
            "ingest",
            "-c", str(paths["config"]),
            "-s", str(paths["sheet"]),
            "-x", str(paths["constraints"]),
            "-p", str(paths["preferences"]),
            "--embeddings", str(paths["embeddings"]),
            "-o", str(snap),
        ]) == 0
        assert main([
            "citations", "--snapshot", str(snap), "--texts", str(paths["texts"]),
            "--threshold", "0.15", "--threshold", "0.25", "--threshold", "0.35",
            "-o", str(base / "ignored.json"),
        ]) == 0
        core = ApiCore(ServiceState.from_snapshot(load_snapshot(str(snap))))

        def dump(name, method, path, query=None, body=None):
            status, payload = core.handle(method, path, query or {}, body)
            assert status == 200, (name, status, payload)
            (OUT / f"{name}.json").write_text(
                json.dumps(payload, sort_keys=True, indent=1) + "\n"
            )

        dump("survey", "GET", "/api/survey")
        dump("papers", "GET", "/api/papers")
        dump("taxonomy", "GET", "/api/taxonomy")
        dump("treemap-1", "GET", "/api/treemap", {"level": ["1"]})
        dump("treemap-2", "GET", "/api/treemap", {"level": ["2"]})
        dump("treemap-3", "GET", "/api/treemap", {"level": ["3"]})
        for t in ("0.15", "0.25", "0.35"):
            dump(f"network-{t}", "GET", "/api/network", {"threshold": [t]})
        dump("affinity", "GET", "/api/affinity")
        dump("insights", "GET", "/api/insights")
        dump("timeline", "GET", "/api/timeline")
        dump("validate", "POST", "/api/validate", None, {})
        dump("recommend-default", "POST", "/api/recommend", None, {"k": 1})
        dump("recommend-k3", "POST", "/api/recommend", None, {"k": 3})
        # an edited preference ordering that lands on a different profile
        dump(
            "recommend-edited",
            "POST",
            "/api/recommend",
            None,
            {
                "k": 1,
                "preferences": [
                    "Setting > Observability > Unobservable",
                    "~Setting > Observability > Partially Observable",
                    "~Setting > Observability > Fully Observable",
                    "Setting > Dynamics > Probabilistic",
                    "Data > Trace > Partial",
                    "~Data > Trace > Cost",
                    "Data > Signal > Rewards",
                ],
            },
        )
        dump(
            "timeline-2018-2021",
            "GET",
            "/api/timeline",
            {"year_min": ["2018"], "year_max": ["2021"]},
        )


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    record()
    print(f"fixtures recorded to {OUT}")
