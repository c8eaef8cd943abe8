import json

from train_track_builder.core.utils import canonical_hash, checksum, graph_to_dot, save_history, to_dot, write_json
from train_track_builder.graphs.graph import MarkedGraph


def test_canonical_hash_ignores_key_order():
    assert canonical_hash({"a": 1, "b": [2, 3]}) == canonical_hash({"b": [2, 3], "a": 1})
    assert canonical_hash({"a": 1}) != canonical_hash({"a": 2})
    assert len(canonical_hash([])) == 64


def test_checksum():
    assert checksum("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


def test_to_dot():
    dot = to_dot(["v", "w"], [("v", "w", "c")], name="G")
    assert dot.splitlines()[0] == "digraph G {"
    assert '  "v" -> "w" [label="c"];' in dot


def test_graph_to_dot(two_vertex_json):
    dot = graph_to_dot(MarkedGraph.from_json(two_vertex_json))
    assert dot.count("->") == 4
    assert '[label="d"]' in dot


def test_write_json_creates_folders(tmp_path):
    target = tmp_path / "out" / "ct.json"
    write_json(str(target), {"passed": True})
    assert json.loads(target.read_text(encoding="utf-8")) == {"passed": True}


def test_save_history_keeps_the_last_fifty(tmp_path):
    path = tmp_path / "history.json"
    for i in range(55):
        save_history(str(path), {"run": i})
    history = json.loads(path.read_text(encoding="utf-8"))
    assert len(history) == 50
    assert history[0] == {"run": 5}
    assert history[-1] == {"run": 54}


def test_save_history_recovers_from_corruption(tmp_path):
    path = tmp_path / "history.json"
    path.write_text("{not json", encoding="utf-8")
    save_history(str(path), {"run": 1})
    assert json.loads(path.read_text(encoding="utf-8")) == [{"run": 1}]
