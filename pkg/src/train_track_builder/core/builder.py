import glob
import random
import time
from argparse import Namespace
from dataclasses import dataclass, field
from typing import Callable

from train_track_builder.cli import parse_automorphism, parse_input, parse_system, parse_toprep
from train_track_builder.core.config import Config, Verdict
from train_track_builder.core.exceptions import (
    BudgetExceededError,
    ChecksumError,
    InputError,
    NonCompletionError,
    TrainTrackError,
    classify_exit_code,
)
from train_track_builder.core.logger import Logger, configure_logging
from train_track_builder.core.store import ArtifactKind, CTStore
from train_track_builder.core.ui import APP_VERSION
from train_track_builder.core.utils import canonical_hash
from train_track_builder.ct import build_ct, fully_irreducible_rel, verify_ct
from train_track_builder.ct.verify import CTCertificate
from train_track_builder.ffs import invariant_ffs_between, meet, minimal_support
from train_track_builder.fixgraph import (
    Variant,
    compute_fix,
    core_filtration,
    extend_to_rays,
    fix_possibilities,
    index,
    is_hyperbolic,
    is_primitively_atoroidal,
    stallings_fixed_graph,
)
from train_track_builder.graphs.automorphism import Automorphism, random_automorphism
from train_track_builder.graphs.words import Alphabet
from train_track_builder.nielsen import Lift, find_eg_inps, find_fixed_point, rotationless_power
from train_track_builder.toprep.normalize import NormalizationNotes, normalize_representative
from train_track_builder.toprep.rtt import RTTLedger, rtt
from train_track_builder.toprep.toprep import TopRep, refine_filtration


class ExitCode:
    """Constants for process exit codes."""

    OK = 0
    ERROR = 1
    NO = 2
    BUDGET = 3
    INPUT = 4


@dataclass
class Report:
    """Result of one command: echo, payload, limits, timing and version."""

    command: str
    result: dict = field(default_factory=dict)
    limits: dict = field(default_factory=dict)
    elapsed: float = 0.0
    exit_code: int = ExitCode.OK
    version: str = APP_VERSION

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "command": self.command,
            "version": self.version,
            "limits": self.limits,
            "result": self.result,
            "exit_code": self.exit_code,
        }
        if timing:
            out["elapsed"] = round(self.elapsed, 6)
        return out


class App:
    """Runs one subcommand against the module operations, with the CT store as a cache."""

    def __init__(self, config: Config | None = None, store: CTStore | None = None):
        self.cfg = config or Config.load()
        self.log: Logger = configure_logging(self.cfg)
        self.store = store
        self._commands: dict[str, Callable[[Namespace], dict]] = {
            "rtt": self._rtt,
            "normalize": self._normalize,
            "ct build": self._ct_build,
            "ct verify": self._ct_verify,
            "irreducible": self._irreducible,
            "meet": self._meet,
            "support": self._support,
            "invariant-ffs": self._invariant_ffs,
            "inps": self._inps,
            "fixed-point": self._fixed_point,
            "rotationless": self._rotationless,
            "fix": self._fix,
            "index": self._index,
            "hyperbolic": self._decision(is_hyperbolic),
            "prim-atoroidal": self._decision(is_primitively_atoroidal),
            "stallings": self._stallings,
            "corpus run": self._corpus,
        }

    @property
    def commands(self) -> list[str]:
        return list(self._commands)

    def _limits(self) -> dict:
        return {"budget": self.cfg.BUDGET, "depth": self.cfg.DEPTH, "seed": self.cfg.SEED}

    def execute(self, command: str, args: Namespace) -> Report:
        """Run ``command``; errors become reports with the matching exit code."""
        report = Report(command, limits=self._limits())
        handler = self._commands.get(command)
        start = time.perf_counter()
        try:
            if handler is None:
                raise InputError(f"unknown command {command!r}")
            report.result = handler(args)
            if report.result.get("verdict") == Verdict.NO:
                report.exit_code = ExitCode.NO
            elif report.result.get("violations"):
                report.exit_code = ExitCode.ERROR
        except BudgetExceededError as e:
            self.log.warning(f"{command}: {e}")
            report.result = {"verdict": Verdict.BUDGET, "error": str(e)}
            report.exit_code = ExitCode.BUDGET
        except NonCompletionError as e:
            self.log.error(f"{command}: {e}")
            report.result = {"error": str(e), "partial": self._partial_json(e.partial)}
            report.exit_code = e.exit_code
        except (TrainTrackError, ValueError, KeyError, FileNotFoundError) as e:
            self.log.error(f"{command}: {e}")
            report.result = {"error": str(e), "type": type(e).__name__}
            report.exit_code = classify_exit_code(e)
        report.elapsed = time.perf_counter() - start
        return report

    @staticmethod
    def _partial_json(partial) -> dict | None:
        if isinstance(partial, tuple) and len(partial) == 2 and isinstance(partial[1], CTCertificate):
            return {"representative": partial[0].to_json(), "certificate": partial[1].to_json()}
        if isinstance(partial, TopRep):
            return {"representative": partial.to_json()}
        return None

    # ------------------------------------------------------------------
    # Persistence
    # ------------------------------------------------------------------

    def persisted_ct(self, phi: Automorphism, systems=()) -> tuple[TopRep, CTCertificate, bool]:
        """CT for ``phi``, from the store when present; the flag reports a cache hit."""
        key = canonical_hash({"automorphism": phi.key(), "systems": [s.to_json() for s in systems]})
        if self.store is not None:
            try:
                hit = self.store.get(key, ArtifactKind.CT)
            except ChecksumError as e:
                self.log.warning(f"ignoring stored CT: {e}")
                hit = None
            if hit is not None:
                f = refine_filtration(TopRep.from_json(hit.payload))
                cert = verify_ct(f, self.cfg)
                if cert.passed:
                    self.log.info(f"cache hit {key[:12]}")
                    return f, cert, True
                self.log.warning(f"stored CT {key[:12]} no longer verifies, rebuilding")
        f, cert = build_ct(phi, systems, self.cfg)
        if self.store is not None:
            self.store.put(key, ArtifactKind.CT, f.to_json())
            self.store.put(key, ArtifactKind.CERTIFICATE, cert.to_json())
        return f, cert, False

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------

    def _systems(self, phi: Automorphism, texts) -> list:
        return [parse_system(phi.names, t) for t in texts or ()]

    def _rtt(self, args: Namespace) -> dict:
        phi = parse_automorphism(args.input)
        ledger = RTTLedger()
        f = rtt(phi, self._systems(phi, args.system), ledger, self.cfg)
        return {
            "representative": f.to_json(),
            "ledger": [{"iteration": e.iteration, "move": e.move, "lambdas": list(e.floats())} for e in ledger],
            "non_increasing": ledger.is_non_increasing(),
        }

    def _normalize(self, args: Namespace) -> dict:
        parsed = parse_input(args.input)
        f = rtt(parsed, config=self.cfg) if isinstance(parsed, Automorphism) else refine_filtration(parsed)
        notes = NormalizationNotes()
        g = normalize_representative(f, notes, config=self.cfg)
        return {"representative": g.to_json(), "notes": vars(notes)}

    def _ct_build(self, args: Namespace) -> dict:
        phi = parse_automorphism(args.input)
        f, cert, cached = self.persisted_ct(phi, self._systems(phi, args.system))
        return {
            "representative": f.to_json(),
            "certificate": cert.to_json(),
            "core_filtration": core_filtration(f).to_json(f),
            "cached": cached,
        }

    def _ct_verify(self, args: Namespace) -> dict:
        f = refine_filtration(parse_toprep(args.input))
        cert = verify_ct(f, self.cfg)
        if cert.over_budget:
            raise BudgetExceededError("CT verification over budget", partial=f)
        return {"verdict": Verdict.YES if cert.passed else Verdict.NO, "certificate": cert.to_json()}

    def _irreducible(self, args: Namespace) -> dict:
        phi = parse_automorphism(args.input)
        lower, upper = (parse_system(phi.names, t) for t in args.rel)
        return fully_irreducible_rel(phi, lower, upper, self.cfg).to_json()

    def _meet(self, args: Namespace) -> dict:
        names = Alphabet.standard(args.rank)
        first, second = (parse_system(names, t) for t in args.systems)
        return {"meet": meet(first, second).to_json()}

    def _support(self, args: Namespace) -> dict:
        names = Alphabet.standard(args.rank)
        system = minimal_support(names, elements=[names.parse(w) for w in args.words])
        return {"support": system.to_json(), "full": system.is_full()}

    def _invariant_ffs(self, args: Namespace) -> dict:
        phi = parse_automorphism(args.input)
        lower, upper = (parse_system(phi.names, t) for t in args.rel)
        found = invariant_ffs_between(phi, lower, upper)
        if found is None:
            return {"verdict": Verdict.NO}
        return {"verdict": Verdict.YES, "system": found.to_json()}

    def _inps(self, args: Namespace) -> dict:
        phi = parse_automorphism(args.input)
        f = rtt(phi, config=self.cfg)
        assert f.filtration is not None
        out = {}
        for r, s in enumerate(f.filtration):
            if s.is_eg:
                out[str(r)] = [f.format(rho) for rho in find_eg_inps(f, r, self.cfg)]
        return {"representative": f.to_json(), "inps": out}

    def _fixed_point(self, args: Namespace) -> dict:
        phi = parse_automorphism(args.input)
        f, _, _ = self.persisted_ct(phi)
        return find_fixed_point(f, Lift.for_automorphism(f, phi), self.cfg).to_json(f)

    def _rotationless(self, args: Namespace) -> dict:
        phi = parse_automorphism(args.input)
        k, cert = rotationless_power(phi, self.cfg)
        return {"exponent": k, "rotationless": k == 1, "certificate": cert.to_json()}

    def _fix(self, args: Namespace) -> dict:
        phi = parse_automorphism(args.input)
        out = compute_fix(phi, self.cfg).to_json()
        if args.possibilities:
            out["possibilities"] = [
                {
                    "generators": [phi.format_word(w) for w in c.generators],
                    "rank": c.rank,
                    "principal": c.principal,
                    "root_free": c.root_free,
                }
                for c in fix_possibilities(phi, self.cfg)
            ]
        return out

    def _index(self, args: Namespace) -> dict:
        return index(parse_automorphism(args.input), self.cfg).to_json()

    def _decision(self, decide) -> Callable[[Namespace], dict]:
        def run(args: Namespace) -> dict:
            phi = parse_automorphism(args.input)
            return decide(phi, self.cfg).to_json(phi)

        return run

    def _stallings(self, args: Namespace) -> dict:
        phi = parse_automorphism(args.input)
        f, _, _ = self.persisted_ct(phi)
        variant = args.variant.upper()
        graph = stallings_fixed_graph(f, Variant.S if variant == Variant.S else Variant.PS, self.cfg)
        if variant == Variant.CS:
            graph = extend_to_rays(graph, self.cfg)
        out = graph.to_json(self.cfg.DEPTH)
        if args.dot:
            out["dot"] = graph.to_dot(self.cfg.DEPTH)
        return out

    # ------------------------------------------------------------------
    # Corpus
    # ------------------------------------------------------------------

    def corpus(self, files: list[str], size: int | None = None) -> list[Automorphism]:
        """Automorphisms read from ``files`` (globs allowed), else a seeded random sample."""
        paths = sorted({p for pattern in files for p in glob.glob(pattern)} | {p for p in files if "*" not in p})
        if paths:
            out = []
            for path in paths:
                with open(path, "r", encoding="utf-8") as fh:
                    out.append(parse_automorphism(fh.read()))
            return out
        rng = random.Random(self.cfg.SEED)  # nosec B311
        out = []
        for _ in range(size or self.cfg.CORPUS_SIZE):
            rank = rng.randint(2, max(2, self.cfg.CORPUS_MAX_RANK))
            out.append(random_automorphism(rank, self.cfg.CORPUS_WORD_LENGTH * rank, rng))
        return out

    def _corpus(self, args: Namespace) -> dict:
        rows = []
        violations = 0
        for phi in self.corpus(args.files, args.size):
            row: dict = {"automorphism": str(phi), "rank": phi.rank}
            try:
                report = index(phi, self.cfg)
            except BudgetExceededError:
                row["status"] = "budget"
            except TrainTrackError as e:
                row["status"] = "error"
                row["error"] = str(e)
            else:
                row.update(status="ok", i=str(report.i), j=str(report.j), exponent=report.exponent)
                if args.check_bounds:
                    row["violations"] = report.bound_violations()
                    violations += bool(row["violations"])
            rows.append(row)
        done = sum(1 for r in rows if r["status"] == "ok")
        self.log.success(f"corpus: {done}/{len(rows)} computed, {violations} with bound violations")
        out: dict = {"entries": rows, "computed": done, "total": len(rows)}
        if args.check_bounds and violations:
            out["violations"] = [r["automorphism"] for r in rows if r.get("violations")]
        return out
