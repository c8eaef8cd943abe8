"""Command-line front end: input parsing, subcommands and exit codes."""

import argparse
import json
import os
import sys
from datetime import datetime

from train_track_builder.core.exceptions import ParseError
from train_track_builder.ffs.system import FreeFactorSystem
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.graphs.words import Alphabet
from train_track_builder.toprep.toprep import TopRep


def _read(source: str) -> str:
    """File contents when ``source`` names a file, else ``source`` itself."""
    if len(source) < 4096 and os.path.isfile(source):
        with open(source, "r", encoding="utf-8") as f:
            return f.read()
    return source


def parse_input(source: str) -> Automorphism | TopRep:
    """An automorphism (JSON or ``a->ab; b->bab``) or a representative (JSON with edges)."""
    text = _read(source).strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.pos) from e
        if isinstance(data, dict) and "edges" in data:
            return TopRep.from_json(data)
        return Automorphism.from_json(data)
    return Automorphism.parse(text)


def parse_automorphism(source: str) -> Automorphism:
    parsed = parse_input(source)
    if isinstance(parsed, TopRep):
        return parsed.automorphism()
    return parsed


def parse_toprep(source: str) -> TopRep:
    parsed = parse_input(source)
    if isinstance(parsed, Automorphism):
        return TopRep.from_automorphism(parsed)
    return parsed


def parse_system(names: Alphabet, text: str) -> FreeFactorSystem:
    """``a,b|c`` is {[<a, b>], [<c>]}; an empty string or ``{}`` is the empty system."""
    text = text.strip()
    if text in ("", "{}", "0"):
        return FreeFactorSystem.empty(names)
    groups = []
    offset = 0
    for block in text.split("|"):
        words = []
        for word in block.split(","):
            words.append(names.parse(word, offset))
            offset += len(word) + 1
        groups.append(words)
    return FreeFactorSystem.from_generators(names, groups)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="train-track-builder",
        description="Relative train tracks, CTs and fixed subgroups of free group automorphisms.",
    )
    parser.add_argument("--config", default="config.json", help="configuration file")
    parser.add_argument("--budget", type=int, help="candidate budget of bounded searches")
    parser.add_argument("--depth", type=int, help="ray display depth")
    parser.add_argument("--seed", type=int, help="seed of the random corpus")
    parser.add_argument("--store", help="CT store path (default from config or TRAIN_TRACK_STORE)")
    parser.add_argument("--no-store", action="store_true", help="do not read or write the CT store")
    parser.add_argument("--json", action="store_true", help="print the report as JSON")
    parser.add_argument("--debug", action="store_true", help="verbose logging")
    parser.add_argument("--quiet", action="store_true", help="only warnings and errors")

    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", help="automorphism text, JSON, or a file containing either")
        return p

    p = with_input("rtt", "relative train track representative")
    p.add_argument("--system", action="append", help="free factor system to realize, e.g. 'a,b|c'")
    with_input("normalize", "normalize a representative")

    ct = sub.add_parser("ct", help="CT construction and verification")
    ct_sub = ct.add_subparsers(dest="ct_command", required=True)
    p = ct_sub.add_parser("build", help="build a CT for a rotationless automorphism")
    p.add_argument("input")
    p.add_argument("--system", action="append", help="invariant free factor system to realize")
    p = ct_sub.add_parser("verify", help="verify the CT properties of a representative")
    p.add_argument("input", help="representative JSON or file")

    p = with_input("irreducible", "full irreducibility relative to a pair of systems")
    p.add_argument("--rel", nargs=2, metavar=("LOWER", "UPPER"), required=True)
    p = sub.add_parser("meet", help="meet of two free factor systems")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("systems", nargs=2)
    p = sub.add_parser("support", help="minimal free factor support of conjugacy classes")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("words", nargs="+")
    p = with_input("invariant-ffs", "invariant free factor system between two systems")
    p.add_argument("--rel", nargs=2, metavar=("LOWER", "UPPER"), required=True)
    with_input("inps", "indivisible Nielsen paths of EG strata")
    with_input("fixed-point", "fixed point of the lift of a CT for an automorphism")
    with_input("rotationless", "least rotationless power")
    p = with_input("fix", "fixed subgroup")
    p.add_argument("--possibilities", action="store_true", help="also list Fix over principal classes")
    with_input("index", "index invariants i and j")
    with_input("hyperbolic", "atoroidal / hyperbolic mapping torus decision")
    with_input("prim-atoroidal", "primitively atoroidal decision")
    p = with_input("stallings", "fixed-point Stallings graphs")
    p.add_argument("--variant", choices=["s", "ps", "cs"], default="s")
    p.add_argument("--dot", action="store_true", help="include DOT source")

    corpus = sub.add_parser("corpus", help="batch runs")
    corpus_sub = corpus.add_subparsers(dest="corpus_command", required=True)
    p = corpus_sub.add_parser("run", help="index of each corpus automorphism")
    p.add_argument("files", nargs="*", help="automorphism files; a seeded random corpus when omitted")
    p.add_argument("--size", type=int, help="size of the random corpus")
    p.add_argument("--check-bounds", action="store_true", help="check the index bounds on every entry")
    return parser


def command_name(args: argparse.Namespace) -> str:
    if args.command == "ct":
        return f"ct {args.ct_command}"
    if args.command == "corpus":
        return f"corpus {args.corpus_command}"
    return args.command


def main(argv: list[str] | None = None) -> None:
    """Entry point for the train-track-builder CLI."""
    from train_track_builder.core.builder import App
    from train_track_builder.core.config import Config, set_config
    from train_track_builder.core.store import CTStore
    from train_track_builder.core.ui import console, print_header, render_report
    from train_track_builder.core.utils import save_history

    args = build_parser().parse_args(argv)
    cfg = Config.load(args.config)
    if args.budget is not None:
        cfg.BUDGET = args.budget
    if args.depth is not None:
        cfg.DEPTH = args.depth
    if args.seed is not None:
        cfg.SEED = args.seed
    if args.store:
        cfg.STORE_PATH = args.store
    cfg.DEBUG_MODE = cfg.DEBUG_MODE or args.debug
    cfg.QUIET_MODE = cfg.QUIET_MODE or args.quiet or args.json
    set_config(cfg)

    store = None if args.no_store else CTStore.from_config(cfg)
    try:
        app = App(cfg, store)
        report = app.execute(command_name(args), args)
    finally:
        if store is not None:
            store.close()

    if args.json:
        print(json.dumps(report.to_json(), indent=2, ensure_ascii=False))
    else:
        if not cfg.QUIET_MODE:
            print_header()
        render_report(report)
        if "dot" in report.result:
            console.print(report.result["dot"], markup=False, highlight=False)

    if cfg.SAVE_HISTORY:
        entry = report.to_json(timing=True)
        entry["date"] = datetime.now().isoformat(timespec="seconds")
        save_history(cfg.HISTORY_FILE, entry)
    sys.exit(report.exit_code)
