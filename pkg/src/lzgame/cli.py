"""Command line front end: ``simulate``, ``parse``, ``analyze``, ``verify``.

``simulate`` reads a JSON experiment file. Every top-level key can also be
set by a flag, and flags win. Schema (all keys optional except where noted)::

    {
      "alphabet": 2,
      "n": 100000,
      "seed": 7,
      "forecaster": {"type": "constant", "p": [0.5, 0.5]}
                  | {"type": "markov", "kernel": "kernel.json" | {...},
                     "initial": [[0.5, 0.5]]},
      "skeptic": {"type": "lz" | "ld" | "lz-restart" | "ld-restart" | "none",
                  "threshold": 2.0},
      "reality": {"type": "faithful"}
               | {"type": "markov", "kernel": ...}
               | {"type": "iid", "p": [...]}
               | {"type": "periodic", "pattern": [0, 1, 1]}
               | {"type": "biased_flip", "kernel": ..., "eps": 0.2,
                  "context": [1], "toward": 1}
               | {"type": "replay", "path": "word.txt", "base": 1},
      "output": {"csv": "trajectory.csv", "summary": "summary.json"},
      "szilard": {"lengths": [1.0, 1.0], "g": 9.80665, "scale": 1.0}
    }

Kernel objects use the ``{"order", "alphabet", "rows"}`` layout; a string is
a path to such a file. Relative paths in the file (kernels, replay words,
outputs) are resolved against the config file's directory; paths given as
flags are taken relative to the working directory. A ``faithful``
reality samples from the forecaster's own law. The default seed comes from
``LZGAME_SEED`` and falls back to 0.
"""

from __future__ import annotations

import argparse
import ast
import csv
import inspect
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .analysis import compression_rate, report
from .core import GameError, InvalidArgument, Word
from .game import ConstantForecaster, Forecaster, MarkovForecaster, SzilardConfig, Trajectory, run, szilard_work
from .lz import parse
from .markov import MarkovKernel, entropy_rate, stationary
from .realities import BiasedFlip, IIDSampler, MarkovSampler, Periodic, Reality, Replay
from .strategies import STRATEGIES, make_strategy
from .verify import SUITES, run_suite

SEED_ENV = "LZGAME_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise InvalidArgument(f"{SEED_ENV} must be an integer, got {raw!r}") from None


@dataclass
class ExperimentConfig:
    alphabet: int = 2
    n: int = 10_000
    seed: int = field(default_factory=default_seed)
    forecaster: dict = field(default_factory=lambda: {"type": "constant"})
    skeptic: dict = field(default_factory=lambda: {"type": "lz"})
    reality: dict = field(default_factory=lambda: {"type": "faithful"})
    output: dict = field(default_factory=dict)
    szilard: dict | None = None
    root: Path = Path(".")

    @classmethod
    def from_dict(cls, data: dict, root: Path = Path(".")) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__ if f != "root"}
        extra = set(data) - known
        if extra:
            raise InvalidArgument(f"unknown config keys {sorted(extra)}; expected a subset of {sorted(known)}")
        return cls(**data, root=root)

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except FileNotFoundError:
            raise InvalidArgument(f"config file {path} does not exist") from None
        except json.JSONDecodeError as exc:
            raise InvalidArgument(f"config file {path} is not valid JSON: {exc}") from None
        return cls.from_dict(data, root=path.parent)

    def _kernel(self, spec: Any) -> MarkovKernel:
        if isinstance(spec, str):
            path = self.root / spec
            if not path.exists():
                raise InvalidArgument(f"kernel file {path} does not exist")
            return MarkovKernel.load(path)
        if isinstance(spec, dict):
            return MarkovKernel.from_dict(spec)
        raise InvalidArgument("a kernel is a file path or an {order, alphabet, rows} object")

    def build_forecaster(self) -> Forecaster:
        spec = dict(self.forecaster)
        kind = spec.get("type", "constant")
        if kind == "constant":
            p = spec.get("p", [1.0 / self.alphabet] * self.alphabet)
            f: Forecaster = ConstantForecaster(p)
        elif kind == "markov":
            if "kernel" not in spec:
                raise InvalidArgument("a markov forecaster needs a 'kernel'")
            f = MarkovForecaster(self._kernel(spec["kernel"]), spec.get("initial"))
        else:
            raise InvalidArgument(f"unknown forecaster type {kind!r}; use 'constant' or 'markov'")
        if f.alphabet_size != self.alphabet:
            raise InvalidArgument(f"forecaster alphabet {f.alphabet_size} != config alphabet {self.alphabet}")
        return f

    def build_reality(self, forecaster: Forecaster) -> Reality:
        spec = dict(self.reality)
        kind = spec.get("type", "faithful")
        if kind == "faithful":
            if isinstance(forecaster, MarkovForecaster):
                r: Reality = MarkovSampler(forecaster.kernel, self.seed)
            else:
                r = IIDSampler(forecaster.p, self.seed)
        elif kind == "markov":
            r = MarkovSampler(self._kernel(spec["kernel"]), self.seed)
        elif kind == "iid":
            r = IIDSampler(spec["p"], self.seed)
        elif kind == "periodic":
            r = Periodic(spec["pattern"], self.alphabet)
        elif kind == "biased_flip":
            kernel = self._kernel(spec["kernel"]) if "kernel" in spec else MarkovKernel.uniform(self.alphabet)
            r = BiasedFlip(kernel, float(spec["eps"]), spec["context"], self.seed, spec.get("toward"))
        elif kind == "replay":
            path = spec.get("path", "-")
            path = path if path == "-" else self.root / path
            r = Replay.from_file(path, self.alphabet, spec.get("base", 1))
        else:
            raise InvalidArgument(
                f"unknown reality type {kind!r}; use faithful, markov, iid, periodic, biased_flip or replay"
            )
        if r.alphabet_size != self.alphabet:
            raise InvalidArgument(f"reality alphabet {r.alphabet_size} != config alphabet {self.alphabet}")
        return r

    def build_skeptic(self):
        spec = dict(self.skeptic)
        return make_strategy(spec.get("type", "lz"), self.alphabet, float(spec.get("threshold", 2.0)))

    def build_szilard(self) -> SzilardConfig | None:
        if not self.szilard:
            return None
        s = self.szilard
        return SzilardConfig(
            tuple(s["lengths"]), float(s.get("g", 9.80665)), float(s.get("scale", 1.0))
        )


def write_trajectory(path: str | Path, traj: Trajectory, work: Sequence[float] | None = None) -> None:
    A = traj.alphabet_size
    header = ["step", "outcome"] + [f"p{a}" for a in range(A)] + [f"q{a}" for a in range(A)]
    header += ["log_capital", "banked"]
    if work is not None:
        header.append("work_joules")
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(header)
        for i in range(len(traj)):
            row = [i + 1, int(traj.outcomes[i])]
            row += [repr(float(x)) for x in traj.forecasts[i]]
            row += [repr(float(x)) for x in traj.predictions[i]]
            row += [repr(float(traj.log_capital[i])), repr(float(traj.banked[i]))]
            if work is not None:
                row.append(repr(float(work[i])))
            out.writerow(row)


def simulate(cfg: ExperimentConfig) -> dict:
    """Run one game and write its outputs; returns the summary."""
    if cfg.n < 1:
        raise InvalidArgument("n must be positive")
    forecaster = cfg.build_forecaster()
    reality = cfg.build_reality(forecaster)
    skeptic = cfg.build_skeptic()
    traj = run(forecaster, skeptic, reality, cfg.n)
    word = traj.word
    summary: dict = {
        "n": cfg.n,
        "seed": cfg.seed,
        "skeptic": cfg.skeptic.get("type", "lz"),
        "final_log_capital": traj.final_log_capital,
        "rate": traj.final_log_capital / cfg.n,
        "compression_rate": compression_rate(word),
    }
    if float(traj.banked[-1]):
        summary["banked"] = float(traj.banked[-1])
    if isinstance(forecaster, MarkovForecaster):
        summary["entropy_rate"] = entropy_rate(forecaster.kernel, stationary(forecaster.kernel))
    work = None
    szilard = cfg.build_szilard()
    if szilard is not None:
        ledger = szilard_work(traj, szilard)
        work = ledger.work
        summary["work"] = float(work[-1])
        summary["log_work"] = float(ledger.log_work[-1])
    csv_path = cfg.output.get("csv")
    if csv_path:
        csv_path = cfg.root / csv_path
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        write_trajectory(csv_path, traj, work)
    summary_path = cfg.output.get("summary")
    if summary_path:
        summary_path = cfg.root / summary_path
        summary_path.parent.mkdir(parents=True, exist_ok=True)
        summary_path.write_text(json.dumps(summary, indent=2) + "\n")
    return summary


def _read_word(args) -> tuple[Word, int]:
    """The word and the base its text used, so output can echo that form."""
    if args.file is not None:
        text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
    elif args.word is not None:
        text = args.word
    else:
        raise InvalidArgument("give a word or --file")
    if args.base == "auto":
        tokens = text.split(",") if "," in text else list(text)
        base = 0 if any(t.strip() == "0" for t in tokens) else 1
    else:
        base = int(args.base)
    return Word.parse(text, args.alphabet, base), base


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",")]


def _literal(text: str):
    try:
        value = ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text
    return tuple(value) if isinstance(value, list) else value


def cmd_simulate(args) -> int:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    if args.alphabet is not None:
        cfg.alphabet = args.alphabet
    if args.n is not None:
        cfg.n = args.n
    if args.seed is not None:
        cfg.seed = args.seed
    if args.p is not None:
        cfg.forecaster = {"type": "constant", "p": _floats(args.p)}
    if args.kernel is not None:
        cfg.forecaster = {"type": "markov", "kernel": str(Path(args.kernel).resolve())}
    if args.skeptic is not None:
        cfg.skeptic = {**cfg.skeptic, "type": args.skeptic}
    if args.threshold is not None:
        cfg.skeptic = {**cfg.skeptic, "threshold": args.threshold}
    if args.csv is not None:
        cfg.output = {**cfg.output, "csv": str(Path(args.csv).resolve())}
    if args.summary is not None:
        cfg.output = {**cfg.output, "summary": str(Path(args.summary).resolve())}
    summary = simulate(cfg)
    print(json.dumps(summary, indent=2))
    return 0


def parse_report(word: Word, base: int = 1) -> dict:
    result = parse(word)
    return {"decomposition": result.slashes(base), "c": result.complexity, "v_size": result.v_size}


def cmd_parse(args) -> int:
    word, base = _read_word(args)
    print(json.dumps(parse_report(word, base)))
    return 0


def cmd_analyze(args) -> int:
    word, _ = _read_word(args)
    kernel = MarkovKernel.load(args.kernel) if args.kernel else None
    p = _floats(args.p) if args.p else None
    print(json.dumps(report(word, ell=args.ell, p=p, kernel=kernel), indent=2))
    return 0


def cmd_verify(args) -> int:
    names = args.suites or list(SUITES)
    params = {}
    for item in args.param:
        key, sep, value = item.partition("=")
        if not sep:
            raise InvalidArgument(f"--param expects key=value, got {item!r}")
        params[key] = _literal(value)
    results = []
    for name in names:
        if name not in SUITES:
            raise InvalidArgument(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        accepted = inspect.signature(SUITES[name]).parameters
        kwargs = {k: v for k, v in params.items() if k in accepted}
        results.append(run_suite(name, **kwargs).as_dict())
    ok = all(r["passed"] for r in results)
    print(json.dumps({"passed": ok, "suites": results}, indent=2))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lzgame", description="Predictive games with universal-coding strategies.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="play one game and write CSV and JSON outputs")
    sim.add_argument("config", nargs="?", help="JSON experiment file")
    sim.add_argument("--alphabet", type=int)
    sim.add_argument("--n", type=int, help="number of rounds")
    sim.add_argument("--seed", type=int, help=f"defaults to ${SEED_ENV} or 0")
    sim.add_argument("--p", help="constant forecast, comma separated")
    sim.add_argument("--kernel", help="Markov forecaster kernel file")
    sim.add_argument("--skeptic", choices=sorted(STRATEGIES))
    sim.add_argument("--threshold", type=float, help="restart threshold for *-restart skeptics")
    sim.add_argument("--csv", help="trajectory output path")
    sim.add_argument("--summary", help="summary JSON output path")
    sim.set_defaults(func=cmd_simulate)

    for name, func, doc in [
        ("parse", cmd_parse, "incremental parsing of a word"),
        ("analyze", cmd_analyze, "diagnostics report for a word"),
    ]:
        p = sub.add_parser(name, help=doc)
        p.add_argument("word", nargs="?")
        p.add_argument("--file", help="read the word from a file ('-' for stdin)")
        p.add_argument("--alphabet", type=int, default=2)
        p.add_argument("--base", choices=["0", "1", "auto"], default="auto",
                       help="number written for the first symbol (auto: 0 if any '0' appears)")
        if name == "analyze":
            p.add_argument("--ell", type=int, default=1)
            p.add_argument("--p", help="reference i.i.d. law, comma separated")
            p.add_argument("--kernel", help="reference Markov kernel file")
        p.set_defaults(func=func)

    ver = sub.add_parser("verify", help="run identity and inequality suites")
    ver.add_argument("suites", nargs="*", metavar="suite", help=f"any of {', '.join(SUITES)}")
    ver.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                     help="override a suite bound, e.g. max_len=10 or sampled=[10000,100000]")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GameError, KeyError, OSError) as exc:
        msg = f"missing config key {exc}" if isinstance(exc, KeyError) else str(exc)
        print(f"lzgame {args.command}: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
