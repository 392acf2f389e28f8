from pathlib import Path

import pytest

from vita.csv_load import load_csv
from vita.session import Session

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "vita" / "data"
CORPUS_CSV = DATA_DIR / "reviews.csv"
WORKFLOW = DATA_DIR / "topic_exploration.vta"


def workflow_lines() -> list[str]:
    lines = []
    for raw in WORKFLOW.read_text().splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


@pytest.fixture(scope="session")
def corpus_path() -> Path:
    return CORPUS_CSV


@pytest.fixture()
def corpus_frame():
    return load_csv(str(CORPUS_CSV), text_columns=["Review"])


@pytest.fixture()
def session(tmp_path):
    return Session.create(tmp_path / "sess", csv_path=CORPUS_CSV, text_columns=["Review"])


@pytest.fixture()
def session_factory(tmp_path):
    counter = iter(range(1000))

    def make() -> Session:
        return Session.create(
            tmp_path / f"sess{next(counter)}", csv_path=CORPUS_CSV, text_columns=["Review"]
        )

    return make
