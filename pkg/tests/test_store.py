import pytest

from conftest import contribution, simple_model
from goalvalue.analysis import analyze
from goalvalue.fuzzy import Level
from goalvalue.model import Prioritization
from goalvalue.store import SessionStore, SnapshotNotFoundError


@pytest.fixture
def model():
    return simple_model(
        {"a1": ["e1", "e2"]}, links=[contribution("l1", "e1", "e2", "help")]
    )


def prioritization(importance=Level.MEDIUM):
    return Prioritization(
        {"e1": (importance, Level.HIGH), "e2": (Level.HIGH, Level.HIGH)}
    )


def record_version(store, model, pri):
    result = analyze(model, pri, created_at="2026-01-01T00:00:00+00:00")
    return store.record(model.id, pri, result)


class TestRecord:
    def test_first_version_is_one(self, tmp_path, model):
        store = SessionStore(tmp_path)
        assert record_version(store, model, prioritization()) == 1

    def test_versions_are_dense(self, tmp_path, model):
        store = SessionStore(tmp_path)
        assert record_version(store, model, prioritization()) == 1
        assert record_version(store, model, prioritization(Level.HIGH)) == 2

    def test_sequence_continues_after_reopen(self, tmp_path, model):
        store = SessionStore(tmp_path)
        record_version(store, model, prioritization())
        reopened = SessionStore(tmp_path)
        assert record_version(reopened, model, prioritization()) == 2

    def test_snapshot_files_exist(self, tmp_path, model):
        store = SessionStore(tmp_path)
        record_version(store, model, prioritization())
        assert (tmp_path / model.id / "v0001.json").exists()
        assert (tmp_path / model.id / "index.json").exists()

    def test_reread_is_byte_identical(self, tmp_path, model):
        store = SessionStore(tmp_path)
        record_version(store, model, prioritization())
        path = tmp_path / model.id / "v0001.json"
        first = path.read_bytes()
        record_version(store, model, prioritization(Level.HIGH))
        assert path.read_bytes() == first


class TestHistory:
    def test_empty(self, tmp_path):
        assert SessionStore(tmp_path).history("nothing") == []

    def test_ascending(self, tmp_path, model):
        store = SessionStore(tmp_path)
        for _ in range(3):
            record_version(store, model, prioritization())
        entries = store.history(model.id)
        assert [e.version for e in entries] == [1, 2, 3]

    def test_summary_has_top_element(self, tmp_path, model):
        store = SessionStore(tmp_path)
        pri = prioritization()
        result = analyze(model, pri, created_at="t")
        store.record(model.id, pri, result)
        entry = store.history(model.id)[0]
        assert entry.summary["topElement"] == result.global_ranking[0]


class TestDiff:
    def test_identity(self, tmp_path, model):
        store = SessionStore(tmp_path)
        record_version(store, model, prioritization())
        diff = store.diff(model.id, 1, 1)
        for entry in diff.entries.values():
            assert entry.delta == 0.0
            assert entry.rank_before == entry.rank_after

    def test_importance_change_visible(self, tmp_path, model):
        store = SessionStore(tmp_path)
        record_version(store, model, prioritization(Level.LOW))
        record_version(store, model, prioritization(Level.VERY_HIGH))
        diff = store.diff(model.id, 1, 2)
        entry = diff.entries["e1"]
        assert entry.importance_before == "Low"
        assert entry.importance_after == "VeryHigh"
        assert entry.delta == pytest.approx(
            entry.global_after - entry.global_before
        )

    def test_antisymmetry(self, tmp_path, model):
        store = SessionStore(tmp_path)
        record_version(store, model, prioritization(Level.LOW))
        record_version(store, model, prioritization(Level.VERY_HIGH))
        forward = store.diff(model.id, 1, 2)
        backward = store.diff(model.id, 2, 1)
        for eid, entry in forward.entries.items():
            assert backward.entries[eid].delta == pytest.approx(-entry.delta)

    def test_removed_element(self, tmp_path, model):
        store = SessionStore(tmp_path)
        record_version(store, model, prioritization())
        smaller = simple_model({"a1": ["e1"]}, model_id=model.id)
        pri = Prioritization({"e1": (Level.MEDIUM, Level.HIGH)})
        store.record(model.id, pri, analyze(smaller, pri, created_at="t"))
        diff = store.diff(model.id, 1, 2)
        assert diff.removed == ("e2",)
        assert diff.added == ()

    def test_missing_version(self, tmp_path, model):
        store = SessionStore(tmp_path)
        record_version(store, model, prioritization())
        with pytest.raises(SnapshotNotFoundError):
            store.diff(model.id, 1, 9)
