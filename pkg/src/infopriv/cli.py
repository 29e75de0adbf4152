"""Command-line front end.

    infopriv gen xor --records 2 --out xor.json
    infopriv capacity --channel xor.json --individual 1 --set Pb --b 2.0 --method grid
    infopriv balance --channel xor.json --format csv
    infopriv invert --channel xor.json --delta 0.4
    infopriv check group --channel xor.json --b 0 --kmax 2
    infopriv decompose --lemma general --trials 50 --seed 0

Exit codes: 0 success / bound holds, 1 a property was violated, 2 usage or
parse error, 3 the requested method exceeds its enumeration cap.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import analysis as an
from .capacity import DEFAULT_ENUM_CAP, DEFAULT_GRID_CAP, KnowledgeSet, capacity, group_capacity
from .channels import dumps_channel, generate, load_channel
from .decomposition import SUITES
from .errors import InfeasibleError, InfoPrivError, SamplingError
from .report import dumps, header

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    channels: list = field(default_factory=list)
    b: Optional[float] = None
    method: Optional[str] = None
    grid: Optional[int] = None
    restarts: int = 4
    seed: int = 0
    tol: Optional[float] = None
    trials: Optional[int] = None
    out: Optional[str] = None
    format: str = "json"

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.b is not None and self.b < 0:
            raise UsageError("--b must be non-negative")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            command=args.command,
            channels=list(getattr(args, "channel", None) or []),
            b=getattr(args, "b", None),
            method=getattr(args, "method", None),
            grid=getattr(args, "grid", None),
            restarts=getattr(args, "restarts", 4),
            seed=getattr(args, "seed", 0),
            tol=getattr(args, "tol", None),
            trials=getattr(args, "trials", None),
            out=getattr(args, "out", None),
            format=getattr(args, "format", "json") or "json",
        )

    def engine_kwargs(self, default_method: str = "grid") -> dict:
        return {"method": self.method or default_method, "resolution": self.grid,
                "restarts": self.restarts, "seed": self.seed}


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _channels(cfg: RunConfig, count: Optional[int] = None):
    try:
        chans = [load_channel(p) for p in cfg.channels]
    except OSError as exc:
        raise UsageError(f"cannot read channel file: {exc}") from None
    except (InfoPrivError, ValueError) as exc:
        raise UsageError(f"invalid channel file: {exc}") from None
    if count is not None and len(chans) < count:
        raise UsageError(f"need {count} --channel argument(s), got {len(chans)}")
    return chans


def _parse_ints(text: str):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# commands

def cmd_gen(args, cfg: RunConfig) -> int:
    kind = args.kind
    params = {}
    if kind in ("xor", "geometric", "truncated_geometric"):
        params["records"] = args.records if args.records is not None else 2
    if kind in ("geometric", "truncated_geometric"):
        params["alpha"] = args.alpha if args.alpha is not None else 0.5
    if kind in ("rr", "randomized_response"):
        params["q"] = args.q if args.q is not None else 0.25
        params["alphabets"] = args.alphabets or (2,) * (args.records or 1)
    if kind == "identity":
        params["alphabets"] = args.alphabets or (2,) * (args.records or 1)
    if kind == "constant":
        params["alphabets"] = args.alphabets or (2,) * (args.records or 1)
        params["outputs"] = args.outputs if args.outputs is not None else 2
    try:
        ch = generate(kind, **params)
    except (ValueError, InfoPrivError) as exc:
        raise UsageError(str(exc)) from None
    _emit(dumps_channel(ch), cfg)
    return EXIT_OK


def cmd_capacity(args, cfg: RunConfig) -> int:
    (ch,) = _channels(cfg, 1)[:1]
    unconstrained = args.set == "P" or (args.set is None and not cfg.b)
    b = 0.0 if unconstrained else (cfg.b if cfg.b is not None else 0.0)
    ks = KnowledgeSet(b)
    try:
        ks.check(ch.input_shape)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    method = cfg.method or ("exact" if ks.is_unconstrained else "grid")
    if method == "exact" and not ks.is_unconstrained:
        raise UsageError("--method exact only supports --set P")
    kwargs = {"resolution": cfg.grid, "restarts": cfg.restarts, "seed": cfg.seed,
              "enum_cap": args.enum_cap, "grid_cap": args.grid_cap}
    start = time.perf_counter()
    if args.individual is not None:
        if not 1 <= args.individual <= ch.n:
            raise UsageError(f"--individual must lie in [1, {ch.n}]")
        est = capacity(ch, (args.individual - 1,), ks, method, **kwargs)
        target = {"individual": args.individual}
    else:
        k = args.group or 1
        if not 1 <= k <= ch.n:
            raise UsageError(f"--group must lie in [1, {ch.n}]")
        est = group_capacity(ch, k, ks, method, **kwargs)
        target = {"group": k}
    elapsed = time.perf_counter() - start
    out = {"header": header("capacity", cfg.seed, channel=cfg.channels[0], **target), "estimate": est.to_dict()}
    if args.timing:
        out["wall_time_s"] = elapsed
    _emit(dumps(out), cfg)
    return EXIT_OK


def _profile(ch, cfg: RunConfig, points: int):
    kwargs = cfg.engine_kwargs()
    if kwargs["method"] == "exact":
        raise UsageError("balance profiles need --method grid or mirror")
    return an.balance_profile(ch, points, channel_id=cfg.channels[0], **kwargs)


def cmd_balance(args, cfg: RunConfig) -> int:
    (ch,) = _channels(cfg, 1)[:1]
    prof = _profile(ch, cfg, args.points)
    if cfg.format == "csv":
        _emit(prof.to_csv(), cfg)
    else:
        _emit(dumps({"header": header("balance", cfg.seed), "profile": prof.to_dict()}), cfg)
    return EXIT_OK


def cmd_invert(args, cfg: RunConfig) -> int:
    (ch,) = _channels(cfg, 1)[:1]
    if args.delta < 0:
        raise UsageError("--delta must be non-negative")
    prof = _profile(ch, cfg, args.points)
    b = an.invert_balance(prof, args.delta)
    _emit(dumps({"header": header("invert", cfg.seed), "delta_target": args.delta, "b": b,
                 "grid_points": args.points}), cfg)
    return EXIT_OK


def cmd_check(args, cfg: RunConfig) -> int:
    tol = cfg.tol if cfg.tol is not None else an.DEFAULT_TOL
    b = cfg.b if cfg.b is not None else 0.0
    kwargs = cfg.engine_kwargs()
    if kwargs["method"] == "exact" and b > 0:
        raise UsageError("--method exact only supports b = 0")
    engine = {k: v for k, v in kwargs.items() if k != "seed"}
    thm = args.theorem
    trials = cfg.trials
    try:
        if thm == "equivalence":
            (ch,) = _channels(cfg, 1)[:1]
            rep = an.check_equivalence(ch, b, args.eps, tol=tol, **kwargs)
        elif thm == "monotonicity":
            (ch,) = _channels(cfg, 1)[:1]
            rep = an.check_monotonicity(an.balance_profile(ch, args.points, channel_id=cfg.channels[0], **kwargs), tol)
        elif thm == "group":
            if cfg.channels:
                (ch,) = _channels(cfg, 1)[:1]
                kmax = args.kmax or ch.n
                rep = an.check_group_privacy(ch, b, range(1, kmax + 1), tol=tol, **kwargs)
            else:
                rep = an.group_privacy_suite(trials or 20, (b,), seed=cfg.seed, tol=tol, **engine)
        elif thm == "compose-basic":
            if cfg.channels:
                rep = an.check_basic_composition(_channels(cfg, 2), b, tol=tol, **kwargs)
            else:
                rep = an.basic_composition_suite(trials or 20, b, seed=cfg.seed, tol=tol, **engine)
        elif thm == "compose-general":
            ch1, ch2 = _channels(cfg, 2)[:2]
            rep = an.check_general_composition(ch1, ch2, args.coupling, b, trials or 10, seed=cfg.seed,
                                               tol=tol, **engine)
        else:  # pragma: no cover - argparse restricts choices
            raise UsageError(f"unknown theorem {thm}")
    except SamplingError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = {"header": header("check", cfg.seed, theorem=thm, b=b, channels=cfg.channels), "report": rep.to_dict()}
    _emit(dumps(out), cfg)
    c = rep.counts
    print(f"{thm}: {rep.verdict} (holds={c['holds']}, inconclusive={c['inconclusive']}, "
          f"violated={c['violated']})", file=sys.stderr)
    return EXIT_VIOLATED if rep.verdict == "violated" else EXIT_OK


def cmd_decompose(args, cfg: RunConfig) -> int:
    tol = cfg.tol if cfg.tol is not None else 1e-9
    default_trials = {"group": 100, "basic": 100, "general": 50}[args.lemma]
    trials = cfg.trials if cfg.trials is not None else default_trials
    reports = SUITES[args.lemma](trials=trials, seed=cfg.seed)
    residuals = np.array([r.residual for r in reports]) if reports else np.zeros(0)
    failures = int(np.sum(residuals > tol))
    skipped = int(sum(r.skipped for r in reports))
    summary = {"trials": len(reports), "max_residual": float(residuals.max()) if reports else 0.0,
               "mean_residual": float(residuals.mean()) if reports else 0.0,
               "tol": tol, "failures": failures, "conditioning_skips": skipped}
    out = {"header": header("decompose", cfg.seed, lemma=args.lemma), "summary": summary,
           "reports": [r.to_dict() for r in reports]}
    _emit(dumps(out), cfg)
    print(f"{args.lemma}: max residual {summary['max_residual']:.3e} over {len(reports)} trials, "
          f"{failures} above {tol:g}", file=sys.stderr)
    return EXIT_VIOLATED if failures else EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _common(p: argparse.ArgumentParser, channel=True, engine=True):
    if channel:
        p.add_argument("--channel", action="append", metavar="PATH", help="channel JSON file (repeatable)")
    p.add_argument("--b", type=float, default=None, help="entropy lower bound in bits")
    if engine:
        p.add_argument("--method", choices=("grid", "exact", "mirror"), default=None)
        p.add_argument("--grid", type=int, default=None, help="lattice resolution G")
        p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--out", default=None, metavar="PATH")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infopriv", description="Information-privacy analysis of discrete channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a standard mechanism as channel JSON")
    p.add_argument("kind", choices=("identity", "constant", "rr", "randomized_response", "xor",
                                    "geometric", "truncated_geometric"))
    p.add_argument("--records", type=int, default=None)
    p.add_argument("--alphabets", type=_parse_ints, default=None)
    p.add_argument("--outputs", type=int, default=None)
    p.add_argument("--q", type=float, default=None, help="flip probability for rr")
    p.add_argument("--alpha", type=float, default=None, help="decay for geometric")
    p.add_argument("--out", default=None, metavar="PATH")

    p = sub.add_parser("capacity", help="individual or group channel capacity")
    _common(p)
    p.add_argument("--set", choices=("P", "Pb"), default=None)
    target = p.add_mutually_exclusive_group()
    target.add_argument("--individual", type=int, default=None, help="record index, 1-based")
    target.add_argument("--group", type=int, default=None, help="group size k")
    p.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP)
    p.add_argument("--grid-cap", type=int, default=DEFAULT_GRID_CAP)
    p.add_argument("--timing", action="store_true", help="add wall time (breaks byte reproducibility)")

    p = sub.add_parser("balance", help="sample the balance function")
    _common(p)
    p.add_argument("--points", type=int, default=an.DEFAULT_B_POINTS)

    p = sub.add_parser("invert", help="largest b whose balance stays below a target")
    _common(p)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--points", type=int, default=an.DEFAULT_B_POINTS)

    p = sub.add_parser("check", help="verify a privacy bound on fixtures or random suites")
    p.add_argument("theorem", choices=("equivalence", "monotonicity", "group", "compose-basic", "compose-general"))
    _common(p)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--coupling", choices=an.COUPLING_FAMILIES, default="product")
    p.add_argument("--points", type=int, default=an.DEFAULT_B_POINTS)

    p = sub.add_parser("decompose", help="numerically verify a chain-rule decomposition")
    p.add_argument("--lemma", choices=("group", "basic", "general"), required=True)
    _common(p, channel=False, engine=False)
    return parser


COMMANDS = {
    "gen": cmd_gen,
    "capacity": cmd_capacity,
    "balance": cmd_balance,
    "invert": cmd_invert,
    "check": cmd_check,
    "decompose": cmd_decompose,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"infopriv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleError as exc:
        print(f"infopriv: infeasible: {exc} (cap: {exc.cap}; fallback: --method {exc.fallback})", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
