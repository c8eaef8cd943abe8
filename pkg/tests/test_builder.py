import json
from argparse import Namespace
from unittest.mock import MagicMock, patch

import pytest

from train_track_builder.core.builder import App, ExitCode, Report
from train_track_builder.core.config import Config, Verdict
from train_track_builder.core.exceptions import BudgetExceededError, NonCompletionError
from train_track_builder.core.store import ArtifactKind, CTStore


@pytest.fixture
def app(tmp_path):
    cfg = Config(LOG_FILE=str(tmp_path / "run.log"), QUIET_MODE=True, CORPUS_SIZE=2, SEED=7)
    return App(cfg)


class TestExecute:
    def test_commands(self, app):
        assert "ct build" in app.commands
        assert "corpus run" in app.commands
        assert len(app.commands) == 17

    def test_unknown_command(self, app):
        report = app.execute("compile", Namespace())
        assert report.exit_code == ExitCode.INPUT

    def test_no_verdict_exits_two(self, app, commutator_tt):
        report = app.execute("hyperbolic", Namespace(input=str(commutator_tt)))
        assert report.result["verdict"] == Verdict.NO
        assert report.exit_code == ExitCode.NO

    def test_yes_verdict(self, app):
        report = app.execute("prim-atoroidal", Namespace(input="a->ab; b->bab"))
        assert report.result["verdict"] == Verdict.YES
        assert report.exit_code == ExitCode.OK

    def test_not_invertible(self, app):
        report = app.execute("index", Namespace(input="a->ab; b->ab"))
        assert report.exit_code == ExitCode.INPUT
        assert report.result["type"] == "NotInvertibleError"

    def test_budget(self, app):
        with patch("train_track_builder.core.builder.index", side_effect=BudgetExceededError("over")):
            report = app.execute("index", Namespace(input="a->ab; b->bab"))
        assert report.exit_code == ExitCode.BUDGET
        assert report.result["verdict"] == Verdict.BUDGET

    def test_non_completion_keeps_the_partial_result(self, app, commutator_rep):
        error = NonCompletionError("stuck", partial=commutator_rep)
        with patch("train_track_builder.core.builder.build_ct", side_effect=error):
            report = app.execute("ct build", Namespace(input="a->ab; b->bab", system=None))
        assert report.exit_code == 1
        assert "representative" in report.result["partial"]

    def test_logs_reach_the_tracker(self, app):
        ui = MagicMock()
        app.log.set_tracker(ui)
        app.execute("index", Namespace(input="a->az"))
        assert ui.add_log.called

    def test_report_json(self):
        report = Report("meet", {"meet": []}, elapsed=0.1234567)
        assert report.to_json()["elapsed"] == 0.123457
        assert "elapsed" not in report.to_json(timing=False)


class TestCommands:
    def test_meet(self, app):
        report = app.execute("meet", Namespace(rank=3, systems=["a,b", "b,c"]))
        assert report.result == {"meet": [["b"]]}

    def test_support(self, app):
        report = app.execute("support", Namespace(rank=2, words=["abAB"]))
        assert report.result["full"] is True

    def test_invariant_ffs(self, app):
        args = Namespace(input="a->a; b->baa; d->Adb", rel=["{}", "a,b"])
        report = app.execute("invariant-ffs", args)
        assert report.result["verdict"] == Verdict.YES

    def test_ct_verify_two_vertex_example(self, app, two_vertex_json):
        report = app.execute("ct verify", Namespace(input=json.dumps(two_vertex_json)))
        assert report.result["verdict"] == Verdict.YES

    def test_stallings_dot(self, app, commutator_tt):
        report = app.execute("stallings", Namespace(input=str(commutator_tt), variant="cs", dot=True))
        assert report.result["variant"] == "CS"
        assert report.result["dot"].startswith("digraph")

    def test_random_corpus_is_seeded(self, app):
        first = [str(phi) for phi in app.corpus([])]
        second = [str(phi) for phi in app.corpus([])]
        assert first == second
        assert len(first) == 2

    def test_corpus_files(self, app, tmp_path):
        (tmp_path / "one.txt").write_text("a->ab; b->bab", encoding="utf-8")
        (tmp_path / "two.txt").write_text("a->b; b->a", encoding="utf-8")
        report = app.execute("corpus run", Namespace(files=[str(tmp_path / "*.txt")], size=None, check_bounds=True))
        assert report.result["total"] == 2
        assert report.result["computed"] == 2
        assert "violations" not in report.result


class TestPersistence:
    def test_ct_is_cached(self, tmp_path, commutator_tt):
        store = CTStore(str(tmp_path / "ct.db"))
        app = App(Config(LOG_FILE=str(tmp_path / "run.log"), QUIET_MODE=True), store)
        _, first, cached = app.persisted_ct(commutator_tt)
        assert not cached
        _, second, cached = app.persisted_ct(commutator_tt)
        assert cached
        assert second.passed
        assert store.get_stats()[ArtifactKind.CERTIFICATE] == 1
        store.close()
