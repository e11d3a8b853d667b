"""Command-line interface: ``putwin {gen,solve,oracle,bench,ilp,ilp-check}``.

Exit codes: 0 success, 1 usage error, 2 input parse error, 3 resource cap
exceeded (oracle size cap or ``--max-nodes`` budget).
"""

from __future__ import annotations

import argparse
import glob
import json
import logging
import sys
from pathlib import Path

import tomli

from . import harness
from .core import PreflibParseError, ProfileError, dump_preflib, generate_impartial_culture, parse_preflib
from .ilp import IlpModel, build_rp_ilp, build_stv_ilp, check_assignment, emit_lp_text
from .priority import ScorerLoadError, load_scorer

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3

log = logging.getLogger("putwinners")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _on_off(value: str) -> bool:
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return value == "on"


def _samples(value: str):
    if value in ("auto", "default"):
        return "auto"
    try:
        k = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a count or 'auto'") from None
    if k < 0:
        raise argparse.ArgumentTypeError("sample count must be non-negative")
    return k


def _read_profile(path):
    try:
        return parse_preflib(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_gen(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.hard:
        profiles = harness.mine_hard_profiles(args.m, args.n, args.count, args.seed, args.rule)
        label = f"# hard rule={args.rule} detector={harness.HARD_RULE_VERSION} seed={args.seed}\n"
    else:
        profiles = [generate_impartial_culture(args.m, args.n, args.seed + i)
                    for i in range(args.count)]
        label = f"# impartial culture seed={args.seed}\n"
    for i, p in enumerate(profiles):
        (out / f"profile_{i:04d}.soc").write_text(label + dump_preflib(p))
    log.info("wrote %d profiles to %s", len(profiles), out)


def _solver_options(args) -> dict:
    opts = dict(priority=args.priority, samples=args.samples, seed=args.seed,
                prune=args.prune, cache=args.cache, max_nodes=args.max_nodes)
    if args.weights:
        if args.priority != "lpml":
            raise UsageError("--weights only applies with --priority lpml")
        opts["scorer"] = load_scorer(args.weights)
    return opts


def cmd_solve(args):
    profile = _read_profile(args.input)
    algo = args.algo or ("dfs" if args.rule == "stv" else "mc")
    if args.rule == "stv" and algo != "dfs" or args.rule == "rp" and algo == "dfs":
        raise UsageError(f"algorithm {algo} is not available for {args.rule}")
    opts = _solver_options(args)
    if "scorer" in opts:
        opts["scorer"].check(profile)
    report = harness.solve(profile, args.rule, algo, args.scc, **opts)
    result = {"rule": args.rule, "algo": algo, **report.to_dict(),
              "winner_names": [profile.alt_names[a] for a in sorted(report.winners)]}
    _write(args.out, json.dumps(result, indent=2) + "\n")
    if not report.complete:
        log.warning("node budget exhausted; winners are a partial result")
        return EXIT_CAP
    return EXIT_OK


def cmd_oracle(args):
    profile = _read_profile(args.input)
    fn = harness.brute_force_stv if args.rule == "stv" else harness.brute_force_rp
    winners = sorted(fn(profile, cap=args.cap))
    print(json.dumps({"rule": args.rule, "winners": winners,
                      "winner_names": [profile.alt_names[a] for a in winners]}))


def _load_configs(path, rule):
    try:
        data = tomli.loads(Path(path).read_text())
    except (OSError, tomli.TOMLDecodeError) as exc:
        raise UsageError(f"bad config file {path}: {exc}") from None
    configs = data.get("configs")
    if not isinstance(configs, dict) or not configs:
        raise UsageError("config file needs one or more [configs.<name>] tables")
    out = []
    for name, cfg in configs.items():
        cfg = dict(cfg)
        cfg.setdefault("rule", rule)
        if "weights" in cfg:
            cfg["scorer"] = load_scorer(cfg.pop("weights"))
        out.append((name, cfg))
    return out


def cmd_bench(args):
    paths = sorted(glob.glob(args.inputs))
    inputs = [(Path(p).stem, parse_preflib(Path(p).read_text())) for p in paths]
    configs = _load_configs(args.configs, args.rule)
    records = harness.run_bench(inputs, configs, jobs=args.jobs)
    _write(args.out, harness.records_to_csv(records))
    if args.json:
        Path(args.json).write_text(harness.records_to_json(records) + "\n")


def _target_index(profile, target: str) -> int:
    if target in profile.alt_names:
        return profile.alt_names.index(target)
    try:
        idx = int(target)
    except ValueError:
        raise UsageError(f"unknown alternative {target!r}") from None
    if not 0 <= idx < profile.m:
        raise UsageError(f"alternative index {idx} out of range")
    return idx


def cmd_ilp(args):
    profile = _read_profile(args.input)
    target = _target_index(profile, args.target)
    build = build_stv_ilp if args.rule == "stv" else build_rp_ilp
    try:
        model = build(profile, target)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(args.emit, emit_lp_text(model))
    if args.emit not in (None, "-"):
        Path(str(args.emit) + "-meta").write_text(model.to_json() + "\n")


def cmd_ilp_check(args):
    try:
        model = IlpModel.from_json(Path(args.model).read_text())
        asg = json.loads(Path(args.assignment).read_text())
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except (ValueError, KeyError) as exc:
        raise PreflibParseError(f"bad model or assignment file: {exc}") from None
    violated = check_assignment(model, {k: int(v) for k, v in asg.items()})
    print(json.dumps({"satisfied": not violated, "violated": violated}))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="putwin", description="PUT winners under STV and Ranked Pairs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate (hard) impartial-culture profiles")
    g.add_argument("--rule", choices=["stv", "rp"], default="stv")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--hard", action="store_true", help="keep only profiles that branch on a tie")
    g.add_argument("--out", required=True, help="output directory")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="compute all PUT winners")
    s.add_argument("--rule", choices=["stv", "rp"], required=True)
    s.add_argument("--algo", choices=["dfs", "ndfs", "mc"])
    s.add_argument("--scc", type=_on_off, default=True, metavar="{on,off}")
    s.add_argument("--priority", choices=["none", "lp", "lpml"], default="none")
    s.add_argument("--weights", help="linear scorer weight file for lpml")
    s.add_argument("--samples", type=_samples, default=0, help="count or 'auto'")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--prune", type=_on_off, default=True, metavar="{on,off}")
    s.add_argument("--cache", type=_on_off, default=True, metavar="{on,off}")
    s.add_argument("--max-nodes", type=int, default=None)
    s.add_argument("--input", required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="brute-force PUT winners (small m only)")
    o.add_argument("--rule", choices=["stv", "rp"], required=True)
    o.add_argument("--input", required=True)
    o.add_argument("--cap", type=int, default=None, help="override the size cap on m")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="run a benchmark matrix")
    b.add_argument("--rule", choices=["stv", "rp"], required=True)
    b.add_argument("--inputs", required=True, help="glob of profile files")
    b.add_argument("--configs", required=True, help="TOML file with [configs.<name>] tables")
    b.add_argument("--out", default="-")
    b.add_argument("--json", help="also write records as JSON")
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_bench)

    i = sub.add_parser("ilp", help="emit the feasibility ILP for one alternative")
    i.add_argument("--rule", choices=["stv", "rp"], required=True)
    i.add_argument("--target", required=True, help="alternative name or 0-based index")
    i.add_argument("--input", required=True)
    i.add_argument("--emit", default="-", help="LP file; FILE-meta gets the JSON model")
    i.set_defaults(func=cmd_ilp)

    c = sub.add_parser("ilp-check", help="check a 0/1 assignment against a model")
    c.add_argument("--model", required=True, help="JSON model written next to the LP file")
    c.add_argument("--assignment", required=True, help="JSON object variable -> 0/1")
    c.set_defaults(func=cmd_ilp_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args) or EXIT_OK
    except UsageError as exc:
        print(f"putwin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreflibParseError, ProfileError, ScorerLoadError) as exc:
        print(f"putwin: input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except harness.ResourceCapError as exc:
        print(f"putwin: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
