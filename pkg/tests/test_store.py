import sqlite3

import pytest

from train_track_builder.core.config import Config
from train_track_builder.core.exceptions import ChecksumError
from train_track_builder.core.store import ArtifactKind, CTStore
from train_track_builder.core.utils import checksum


class TestCTStore:
    @pytest.fixture
    def store(self, tmp_path):
        with CTStore(str(tmp_path / "store.db")) as s:
            yield s

    def test_put_and_get(self, store):
        digest = store.put("k1", ArtifactKind.CT, {"vertices": ["v"], "edges": {}})
        hit = store.get("k1", ArtifactKind.CT)
        assert hit is not None
        assert hit.payload == {"vertices": ["v"], "edges": {}}
        assert hit.checksum == digest
        assert store.has("k1", ArtifactKind.CT)
        assert not store.has("k1", ArtifactKind.REPORT)

    def test_miss(self, store):
        assert store.get("missing", ArtifactKind.CT) is None

    def test_overwrite(self, store):
        store.put("k1", ArtifactKind.CERTIFICATE, {"passed": False})
        store.put("k1", ArtifactKind.CERTIFICATE, {"passed": True})
        assert store.get("k1", ArtifactKind.CERTIFICATE).payload == {"passed": True}
        assert store.get_stats()[ArtifactKind.CERTIFICATE] == 1

    def test_unknown_kind(self, store):
        with pytest.raises(ValueError):
            store.put("k1", "image", {})

    def test_stats_count_hits(self, store):
        store.put("k1", ArtifactKind.CT, {})
        store.put("k2", ArtifactKind.REPORT, {})
        store.get("k1", ArtifactKind.CT)
        store.get("k1", ArtifactKind.CT)
        stats = store.get_stats()
        assert stats[ArtifactKind.CT] == 1
        assert stats[ArtifactKind.REPORT] == 1
        assert stats["hits"] == 2

    def test_clear(self, store):
        store.put("k1", ArtifactKind.CT, {})
        store.clear()
        assert not store.has("k1", ArtifactKind.CT)


class TestCorruption:
    def test_tampered_payload(self, tmp_path):
        path = str(tmp_path / "store.db")
        with CTStore(path) as store:
            store.put("k1", ArtifactKind.CT, {"edges": 2})
        conn = sqlite3.connect(path)
        conn.execute("UPDATE artifacts SET payload = ? WHERE key = ?", ('{"edges": 3}', "k1"))
        conn.commit()
        conn.close()
        with CTStore(path) as store:
            with pytest.raises(ChecksumError):
                store.get("k1", ArtifactKind.CT)

    def test_payload_that_is_not_json(self, tmp_path):
        path = str(tmp_path / "store.db")
        with CTStore(path) as store:
            store.put("k1", ArtifactKind.CT, {})
        text = "{broken"
        conn = sqlite3.connect(path)
        conn.execute("UPDATE artifacts SET payload = ?, checksum = ? WHERE key = ?", (text, checksum(text), "k1"))
        conn.commit()
        conn.close()
        with CTStore(path) as store:
            with pytest.raises(ChecksumError):
                store.get("k1", ArtifactKind.CT)

    def test_persistence(self, tmp_path):
        cfg = Config(STORE_PATH=str(tmp_path / "persist.db"))
        with CTStore.from_config(cfg) as first:
            first.put("k1", ArtifactKind.REPORT, {"verdict": "YES"})
        with CTStore.from_config(cfg) as second:
            assert second.get("k1", ArtifactKind.REPORT).payload == {"verdict": "YES"}
