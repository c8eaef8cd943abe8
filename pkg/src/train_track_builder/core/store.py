import json
import sqlite3
import threading
import time
from dataclasses import dataclass

from train_track_builder.core.config import Config
from train_track_builder.core.exceptions import ChecksumError
from train_track_builder.core.utils import checksum


class ArtifactKind:
    """Constants for stored artifact kinds."""

    CT = "ct"
    CERTIFICATE = "certificate"
    REPORT = "report"

    ALL = (CT, CERTIFICATE, REPORT)


@dataclass
class StoredArtifact:
    key: str
    kind: str
    payload: dict
    checksum: str
    timestamp: float


class CTStore:
    """Content-addressed SQLite store of CTs, certificates and reports (WAL mode).

    Rows are keyed by the canonical hash of an automorphism and an artifact
    kind; every payload is stored with its sha256 and checked on load.
    """

    def __init__(self, path: str):
        self.db_path = path
        self.lock = threading.RLock()
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._conn.execute("PRAGMA journal_mode=WAL")
        self._conn.execute("PRAGMA synchronous=NORMAL")
        self._init_db()

    @classmethod
    def from_config(cls, config: Config) -> "CTStore":
        return cls(config.STORE_PATH)

    def _init_db(self):
        with self.lock:
            self._conn.execute(
                """
                CREATE TABLE IF NOT EXISTS artifacts (
                    key TEXT NOT NULL,
                    kind TEXT NOT NULL,
                    payload TEXT NOT NULL,
                    checksum TEXT NOT NULL,
                    timestamp REAL,
                    hits INTEGER DEFAULT 0,
                    PRIMARY KEY (key, kind)
                )
            """
            )
            self._conn.execute("CREATE INDEX IF NOT EXISTS idx_kind ON artifacts(kind)")
            self._conn.commit()

    def put(self, key: str, kind: str, payload: dict) -> str:
        """Store ``payload`` under ``(key, kind)`` and return its checksum."""
        if kind not in ArtifactKind.ALL:
            raise ValueError(f"unknown artifact kind {kind!r}")
        text = json.dumps(payload, sort_keys=True, ensure_ascii=False)
        digest = checksum(text)
        with self.lock:
            self._conn.execute(
                """
                INSERT INTO artifacts (key, kind, payload, checksum, timestamp)
                VALUES (?, ?, ?, ?, ?)
                ON CONFLICT(key, kind) DO UPDATE SET
                    payload = excluded.payload,
                    checksum = excluded.checksum,
                    timestamp = excluded.timestamp
            """,
                (key, kind, text, digest, time.time()),
            )
            self._conn.commit()
        return digest

    def get(self, key: str, kind: str) -> StoredArtifact | None:
        """The stored artifact, None on a miss; a payload that fails its checksum raises ChecksumError."""
        with self.lock:
            row = self._conn.execute(
                "SELECT payload, checksum, timestamp FROM artifacts WHERE key = ? AND kind = ?", (key, kind)
            ).fetchone()
            if row is None:
                return None
            self._conn.execute("UPDATE artifacts SET hits = hits + 1 WHERE key = ? AND kind = ?", (key, kind))
            self._conn.commit()
        text, digest, timestamp = row
        if checksum(text) != digest:
            raise ChecksumError(f"stored {kind} for {key[:12]} failed its checksum")
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise ChecksumError(f"stored {kind} for {key[:12]} is not valid JSON") from e
        return StoredArtifact(key, kind, payload, digest, timestamp)

    def has(self, key: str, kind: str) -> bool:
        with self.lock:
            cursor = self._conn.execute("SELECT 1 FROM artifacts WHERE key = ? AND kind = ?", (key, kind))
            return cursor.fetchone() is not None

    def get_stats(self) -> dict[str, int]:
        """Row counts per artifact kind plus the total number of cache hits."""
        stats = {kind: 0 for kind in ArtifactKind.ALL}
        stats["hits"] = 0
        with self.lock:
            cursor = self._conn.execute("SELECT kind, COUNT(*), SUM(hits) FROM artifacts GROUP BY kind")
            for kind, count, hits in cursor:
                stats[kind] = count
                stats["hits"] += hits or 0
        return stats

    def clear(self):
        with self.lock:
            self._conn.execute("DELETE FROM artifacts")
            self._conn.commit()

    def close(self):
        with self.lock:
            self._conn.close()

    def __enter__(self) -> "CTStore":
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()

    def __del__(self):
        try:
            self._conn.close()
        except Exception:
            pass
