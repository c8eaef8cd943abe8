import json

import pytest

from train_track_builder.cli import build_parser, command_name, main, parse_input, parse_system, parse_toprep
from train_track_builder.core.exceptions import ParseError
from train_track_builder.ffs.system import FreeFactorSystem
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.graphs.words import Alphabet
from train_track_builder.toprep.toprep import TopRep

NAMES = Alphabet.standard(3)


def read_report(out: str) -> dict:
    """The JSON report; warnings logged to the console may precede it."""
    return json.loads(out[out.index("{\n"):])


class TestInputParsing:
    def test_automorphism_text(self, commutator_tt):
        assert parse_input("a->ab; b->bab") == commutator_tt

    def test_representative_json(self, two_vertex_json):
        parsed = parse_input(json.dumps(two_vertex_json))
        assert isinstance(parsed, TopRep)
        assert parsed.graph.num_vertices == 2

    def test_file_input(self, tmp_path, commutator_tt):
        path = tmp_path / "phi.txt"
        path.write_text("a->ab; b->bab\n", encoding="utf-8")
        assert parse_input(str(path)) == commutator_tt

    def test_invalid_json(self):
        with pytest.raises(ParseError) as exc:
            parse_input('{"rank": 2,}')
        assert exc.value.position is not None

    def test_toprep_from_automorphism(self, commutator_tt):
        assert parse_toprep("a->ab; b->bab").automorphism() == commutator_tt

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("", "{}"),
            ("{}", "{}"),
            ("a,b|c", "<a, b>, <c>"),
            ("a", "<a>"),
            ("bab", "<bab>"),
        ],
    )
    def test_parse_system(self, text, expected):
        assert parse_system(NAMES, text).same_as(FreeFactorSystem.parse(NAMES, expected))

    def test_system_error_position(self):
        with pytest.raises(ParseError) as exc:
            parse_system(NAMES, "a,bz")
        assert exc.value.position == 3


class TestParser:
    @pytest.mark.parametrize(
        "argv, command",
        [
            (["ct", "build", "a->ab; b->bab"], "ct build"),
            (["ct", "verify", "rep.json"], "ct verify"),
            (["corpus", "run", "--size", "3"], "corpus run"),
            (["stallings", "a->b; b->a", "--variant", "cs", "--dot"], "stallings"),
            (["irreducible", "a->ab; b->bab", "--rel", "{}", "a,b"], "irreducible"),
        ],
    )
    def test_command_names(self, argv, command):
        assert command_name(build_parser().parse_args(argv)) == command

    def test_global_limits(self):
        args = build_parser().parse_args(["--budget", "10", "--depth", "4", "--no-store", "index", "a->ab; b->bab"])
        assert (args.budget, args.depth, args.no_store) == (10, 4, True)

    def test_command_is_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestMain:
    def run(self, argv, tmp_path, capsys) -> tuple[int, dict]:
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"log_file": str(tmp_path / "run.log")}), encoding="utf-8")
        with pytest.raises(SystemExit) as exc:
            main(["--config", str(config), "--no-store", "--json", *argv])
        return exc.value.code, read_report(capsys.readouterr().out)

    def test_rotationless(self, tmp_path, capsys):
        code, report = self.run(["rotationless", "a->b; b->a"], tmp_path, capsys)
        assert code == 0
        assert report["command"] == "rotationless"
        assert report["result"]["exponent"] == 2

    def test_meet(self, tmp_path, capsys):
        code, report = self.run(["meet", "--rank", "3", "a,b", "a,c"], tmp_path, capsys)
        assert code == 0
        assert report["result"]["meet"] == [["a"]]

    def test_not_invertible(self, tmp_path, capsys):
        code, report = self.run(["fix", "a->ab; b->ab"], tmp_path, capsys)
        assert code == 4
        assert report["result"]["type"] == "NotInvertibleError"

    def test_parse_error(self, tmp_path, capsys):
        code, report = self.run(["index", "a->az"], tmp_path, capsys)
        assert code == 4
        assert "position 4" in report["result"]["error"]

    def test_store_is_used(self, tmp_path, capsys, commutator_tt):
        store = tmp_path / "ct.db"
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"log_file": str(tmp_path / "run.log")}), encoding="utf-8")
        for expected in (False, True):
            with pytest.raises(SystemExit):
                main(["--config", str(config), "--store", str(store), "--json", "ct", "build", str(commutator_tt)])
            assert read_report(capsys.readouterr().out)["result"]["cached"] is expected


def test_automorphism_round_trip_through_text(commutator_tt):
    assert Automorphism.parse(str(commutator_tt)) == commutator_tt
