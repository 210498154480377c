import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import fixtures  # noqa: E402
from surveyscope.constraints import parse_constraints  # noqa: E402
from surveyscope.logic import build_theory  # noqa: E402


@pytest.fixture(scope="session")
def modelacq_corpus():
    return fixtures.modelacq_corpus()


@pytest.fixture(scope="session")
def modelacq_directives():
    return parse_constraints(fixtures.MODELACQ_CONSTRAINTS)


@pytest.fixture(scope="session")
def modelacq_theory(modelacq_corpus, modelacq_directives):
    return build_theory(modelacq_corpus, modelacq_directives)


@pytest.fixture(scope="session")
def micro_corpus():
    return fixtures.micro_corpus()


@pytest.fixture(scope="session")
def micro_theory(micro_corpus):
    return build_theory(micro_corpus, parse_constraints(fixtures.MICRO_CONSTRAINTS))


def write_modelacq_inputs(base: Path, violation: bool = False) -> dict:
    """Write the modelacq fixture as files; returns paths keyed by role."""
    paths = {
        "config": base / "config.yaml",
        "sheet": base / "sheet.csv",
        "constraints": base / "constraints.txt",
        "preferences": base / "prefs.txt",
        "embeddings": base / "embeddings.txt",
        "texts": base / "texts",
    }
    base.mkdir(parents=True, exist_ok=True)
    paths["config"].write_text(fixtures.MODELACQ_CONFIG)
    paths["sheet"].write_text(fixtures.rows_to_csv(fixtures.modelacq_sheet_rows(violation)))
    paths["constraints"].write_text(fixtures.MODELACQ_CONSTRAINTS)
    paths["preferences"].write_text(fixtures.MODELACQ_PREFERENCES)
    paths["embeddings"].write_text(fixtures.MODELACQ_EMBEDDINGS)
    paths["texts"].mkdir(exist_ok=True)
    for paper_id, body in fixtures.MODELACQ_TEXTS.items():
        (paths["texts"] / f"{paper_id}.txt").write_text(body)
    return paths


@pytest.fixture(scope="session")
def modelacq_files(tmp_path_factory):
    return write_modelacq_inputs(tmp_path_factory.mktemp("modelacq"))


@pytest.fixture(scope="session")
def modelacq_snapshot(modelacq_files, tmp_path_factory):
    """Snapshot directory built through the CLI, citations included."""
    from surveyscope.cli import main

    out = tmp_path_factory.mktemp("snapshot") / "snap"
    rc = main(
        [
            "ingest",
            "-c", str(modelacq_files["config"]),
            "-s", str(modelacq_files["sheet"]),
            "-x", str(modelacq_files["constraints"]),
            "-p", str(modelacq_files["preferences"]),
            "--embeddings", str(modelacq_files["embeddings"]),
            "-o", str(out),
        ]
    )
    assert rc == 0
    rc = main(
        [
            "citations",
            "--snapshot", str(out),
            "--texts", str(modelacq_files["texts"]),
            "--threshold", "0.15",
            "--threshold", "0.25",
            "--threshold", "0.35",
            "-o", str(out / "graph-dump.json"),
        ]
    )
    assert rc == 0
    return out
