import json
import socket
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r, ensure_ascii=False) + "\n")
    return path


@pytest.fixture
def jsonl(tmp_path):
    """Write records to a temp JSON-lines file and return its path."""

    def _write(records, name="data.jsonl"):
        return str(write_jsonl(tmp_path / name, records))

    return _write


@pytest.fixture
def no_network(monkeypatch):
    """Make any socket connection attempt fail loudly."""

    def _refuse(*args, **kwargs):
        raise AssertionError("network access attempted during an offline test")

    monkeypatch.setattr(socket.socket, "connect", _refuse)
    monkeypatch.setattr(socket, "create_connection", _refuse)


def load_from_records(records):
    """Build an Ontology from record dicts without keeping a file around."""
    import tempfile

    from topictrap.ontology import load_ontology

    with tempfile.TemporaryDirectory() as d:
        return load_ontology(str(write_jsonl(Path(d) / "o.jsonl", records)))


def resources_from(records):
    import tempfile

    from topictrap.index import load_resources

    with tempfile.TemporaryDirectory() as d:
        return load_resources(str(write_jsonl(Path(d) / "r.jsonl", records)))


def fixture_config(dst):
    """Copy the committed fixture corpus into dst and load its config."""
    import shutil

    from topictrap.config import load_config

    work = Path(dst) / "fixtures"
    shutil.copytree(FIXTURES, work)
    return load_config(str(work / "config.json"))


def build_all(cfg):
    """Run the three build stages; returns the index build digest."""
    from topictrap.pipeline import run_build_corpus, run_build_index, run_build_relatives

    run_build_corpus(cfg)
    run_build_relatives(cfg)
    return run_build_index(cfg)


@pytest.fixture(scope="session")
def fixture_runtime(tmp_path_factory):
    """One fully built fixture world shared by the read-only query tests."""
    from topictrap.pipeline import load_runtime

    cfg = fixture_config(tmp_path_factory.mktemp("world"))
    build_all(cfg)
    return load_runtime(cfg)
