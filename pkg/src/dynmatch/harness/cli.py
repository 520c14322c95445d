"""Command-line entry point.

Subcommands:
  run      replay a stream through an algorithm, report per-rep results
  gen      generate an update stream file (random insertion order, optional
           undo suffix)
  profile  turn a results CSV into a performance-profile TSV

Exit codes: 0 on success, 2 on parse errors, replay errors, invariant
violations found in audit mode, or an oracle-limit breach when the exact
baseline itself must solve the instance (--algo oracle).
"""

from __future__ import annotations

import argparse
import csv
import os
import random
import sys
from pathlib import Path

from dynmatch.errors import (
    MatchingCorruptionError,
    OracleLimitError,
    ReplayError,
    StreamParseError,
)
from dynmatch.harness.profiles import (
    default_tau_grid,
    geometric_mean,
    parse_tau_grid,
    perf_profile,
)
from dynmatch.harness.replay import (
    RESULT_FIELDS,
    level_factory,
    oracle_factory,
    random_walk_factory,
    result_row,
    run_repetitions,
)
from dynmatch.harness.streams import (
    UpdateStream,
    final_graph,
    format_stream,
    gen_insertion_stream,
    gen_undo_suffix,
    parse_static_edgelist,
    parse_temporal,
)
from dynmatch.levels import LevelConfig
from dynmatch.mcm import McmConfig
from dynmatch.oracle import exact_mwm
from dynmatch.random_walk import RandomConfig

ALGO_CHOICES = ("random", "level-walk", "level-bfs", "oracle")


def _default_seed() -> int:
    raw = os.environ.get("DYNMATCH_SEED", "1")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"DYNMATCH_SEED must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynmatch",
        description="Dynamic approximate maximum-weight matching benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="replay a stream through an algorithm")
    p_run.add_argument("--input", required=True, help="input graph/stream file")
    p_run.add_argument(
        "--temporal",
        action="store_true",
        help="input is a temporal stream ('u v w ts [op]'), not a static "
        "edge list",
    )
    p_run.add_argument("--algo", required=True, choices=ALGO_CHOICES)
    p_run.add_argument(
        "--seed",
        type=int,
        default=None,
        help="master seed (default: $DYNMATCH_SEED or 1)",
    )
    p_run.add_argument("--reps", type=int, default=10, help="repetitions")
    p_run.add_argument(
        "--undo-percent",
        type=float,
        default=0.0,
        help="append an undo suffix reverting the last X%% of ops",
    )
    p_run.add_argument(
        "--audit",
        action="store_true",
        help="check matching invariants after every op (slow)",
    )
    p_run.add_argument(
        "--opt",
        default="auto",
        help="'auto' solves the final graph exactly (skipped with a warning "
        "beyond oracle limits), 'none' disables ratios, a number supplies a "
        "precomputed OPT",
    )
    p_run.add_argument("--out", help="append result rows to this CSV file")
    p_run.add_argument("--label", help="instance label for result rows")

    walk = p_run.add_argument_group("random-walk options")
    walk.add_argument("--epsilon", type=float, default=1.0)
    walk.add_argument("--walks", type=int, default=1, help="walks per campaign")
    walk.add_argument(
        "--stop-early",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="abort a campaign after beta consecutive failed walks",
    )
    walk.add_argument("--beta", type=int, default=5)
    walk.add_argument(
        "--theorem-mode",
        action="store_true",
        help="use the analysed walk budget ceil(max_degree^(2/eps+3) * ln n)",
    )

    lvl = p_run.add_argument_group("level options")
    lvl.add_argument("--level-epsilon", type=float, default=1.0)
    lvl.add_argument(
        "--mcm",
        choices=("walk", "bfs"),
        default=None,
        help="per-level matching subroutine (defaults to the --algo suffix)",
    )
    lvl.add_argument("--mcm-epsilon", type=float, default=None)
    lvl.add_argument("--mcm-repetitions", type=int, default=None)
    lvl.add_argument("--delta-settling", action="store_true")
    lvl.add_argument("--lazy-threshold", type=int, default=None)
    lvl.add_argument("--safe-mode", action="store_true")
    lvl.add_argument(
        "--mcm-depth-unbounded",
        action="store_true",
        help="let BFS augmentation search without the depth budget",
    )
    lvl.add_argument("--allow-small-epsilon", action="store_true")

    p_run.add_argument(
        "--oracle-interval",
        type=int,
        default=100,
        help="ops between exact recomputes for --algo oracle",
    )
    p_run.set_defaults(func=cmd_run)

    p_gen = sub.add_parser("gen", help="generate an update stream file")
    src = p_gen.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="static edge list to shuffle into a stream")
    src.add_argument(
        "--random",
        nargs=2,
        type=int,
        metavar=("N", "M"),
        help="generate M distinct random edges on N vertices instead",
    )
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument(
        "--undo-percent",
        type=float,
        default=0.0,
        help="append an undo suffix reverting the last X%% of ops",
    )
    p_gen.add_argument("--out", help="output path (default: stdout)")
    p_gen.set_defaults(func=cmd_gen)

    p_prof = sub.add_parser("profile", help="results CSV -> profile TSV")
    p_prof.add_argument("--results", required=True, help="results CSV from run")
    p_prof.add_argument(
        "--tau-grid",
        default=None,
        help="'0.8,0.9,1.0' or 'start:stop:step' (default 0.50:1.00:0.01)",
    )
    p_prof.add_argument("--out", help="output path (default: stdout)")
    p_prof.set_defaults(func=cmd_profile)

    return parser


def _load_stream(args) -> UpdateStream:
    text = Path(args.input).read_text()
    if args.temporal:
        stream = parse_temporal(text)
        dropped = {
            k: v for k, v in stream.provenance.get("warnings", {}).items() if v
        }
        if dropped:
            print(f"warning: cleaned temporal input: {dropped}", file=sys.stderr)
        return stream
    parsed = parse_static_edgelist(text)
    skipped = {k: v for k, v in parsed.warnings.items() if v}
    if skipped:
        print(f"warning: skipped lines in edge list: {skipped}", file=sys.stderr)
    return gen_insertion_stream(parsed.n, parsed.edges, args.seed)


def _build_factory(args) -> tuple[object, str]:
    """Returns (factory, config label) for the chosen algorithm."""
    if args.algo == "random":
        config = RandomConfig(
            epsilon=args.epsilon,
            num_walks=args.walks,
            stop_early=args.stop_early,
            beta=args.beta,
            theorem_mode=args.theorem_mode,
        )
        return random_walk_factory(config), config.label()
    if args.algo in ("level-walk", "level-bfs"):
        kind = args.algo.split("-", 1)[1]
        if args.mcm is not None and args.mcm != kind:
            raise SystemExit(f"--mcm {args.mcm} contradicts --algo {args.algo}")
        mcm = None
        explicit = (
            args.mcm_epsilon is not None
            or args.mcm_repetitions is not None
            or args.lazy_threshold is not None
            or args.delta_settling
            or args.safe_mode
            or args.mcm_depth_unbounded
        )
        if explicit:
            mcm = McmConfig(
                epsilon=(
                    args.mcm_epsilon
                    if args.mcm_epsilon is not None
                    else args.level_epsilon
                ),
                repetitions=(
                    args.mcm_repetitions if args.mcm_repetitions is not None else 1
                ),
                delta_settling=args.delta_settling,
                lazy_threshold=(
                    args.lazy_threshold if args.lazy_threshold is not None else 0
                ),
                safe_mode=args.safe_mode,
                depth_bounded=not args.mcm_depth_unbounded,
                kind=kind,
            )
        config = LevelConfig(
            epsilon=args.level_epsilon,
            mcm_kind=kind,
            mcm=mcm,
            allow_small_epsilon=args.allow_small_epsilon,
        )
        return level_factory(config), config.label()
    if args.algo == "oracle":
        return (
            oracle_factory(args.oracle_interval),
            f"interval={args.oracle_interval}",
        )
    raise SystemExit(f"unknown algorithm {args.algo!r}")


def cmd_run(args) -> int:
    if args.seed is None:
        args.seed = _default_seed()
    stream = _load_stream(args)
    if args.undo_percent:
        stream = gen_undo_suffix(stream, args.undo_percent, args.seed + 1)
    factory, config_label = _build_factory(args)

    opt = None
    if args.opt == "auto":
        try:
            _, opt = exact_mwm(final_graph(stream))
        except OracleLimitError as exc:
            print(f"warning: skipping OPT: {exc}", file=sys.stderr)
    elif args.opt != "none":
        try:
            opt = float(args.opt)
        except ValueError:
            raise SystemExit(
                f"--opt must be 'auto', 'none', or a number, got {args.opt!r}"
            )

    instance = args.label or Path(args.input).name
    results = run_repetitions(
        stream,
        factory,
        algorithm=args.algo,
        config=config_label,
        reps=args.reps,
        master_seed=args.seed,
        instance=instance,
        opt_weight=opt,
        audit=args.audit,
    )

    for r in results:
        ratio = "" if r.opt_ratio is None else f"  ratio={r.opt_ratio:.4f}"
        print(
            f"rep {r.repetition}: weight={r.final_weight:g}  "
            f"time={r.total_time:.4f}s{ratio}"
        )
    weights = [r.final_weight for r in results]
    gm = (
        geometric_mean(weights)
        if weights and all(w > 0 for w in weights)
        else (sum(weights) / len(weights) if weights else 0.0)
    )
    summary = (
        f"{args.algo} [{config_label}] on {instance}: "
        f"geo-mean weight {gm:.2f} over {len(results)} reps"
    )
    if opt is not None and opt > 0:
        summary += f", OPT {opt:g} (geo-mean ratio {gm / opt:.4f})"
    print(summary)

    if args.out:
        path = Path(args.out)
        fresh = not path.exists() or path.stat().st_size == 0
        with path.open("a", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=RESULT_FIELDS)
            if fresh:
                writer.writeheader()
            for r in results:
                writer.writerow(result_row(r))
        print(f"appended {len(results)} rows to {path}")
    return 0


def cmd_gen(args) -> int:
    if args.seed is None:
        args.seed = _default_seed()
    if args.random:
        n, m = args.random
        if n < 2:
            raise SystemExit("--random needs at least 2 vertices")
        if m > n * (n - 1) // 2:
            raise SystemExit(f"{m} edges do not fit in a simple graph on {n} vertices")
        rng = random.Random(args.seed)
        seen: set[tuple[int, int]] = set()
        while len(seen) < m:
            u = rng.randrange(n)
            v = rng.randrange(n)
            if u != v:
                seen.add((min(u, v), max(u, v)))
        edges = [(u, v, None) for u, v in sorted(seen)]
    else:
        parsed = parse_static_edgelist(Path(args.input).read_text())
        n, edges = parsed.n, parsed.edges
    stream = gen_insertion_stream(n, edges, args.seed)
    if args.undo_percent:
        stream = gen_undo_suffix(stream, args.undo_percent, args.seed + 1)
    text = format_stream(stream)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {len(stream.ops)} ops to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def cmd_profile(args) -> int:
    taus = parse_tau_grid(args.tau_grid) if args.tau_grid else default_tau_grid()
    with open(args.results, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise SystemExit(f"no result rows in {args.results}")
    profile = perf_profile(rows, taus)
    if profile.skipped_no_opt:
        print(
            f"warning: {profile.skipped_no_opt} rows without OPT were skipped",
            file=sys.stderr,
        )
    if not profile.fractions:
        raise SystemExit("no rows with OPT values; nothing to profile")
    text = profile.to_tsv()
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote profile to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StreamParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ReplayError, MatchingCorruptionError, OracleLimitError) as exc:
        # OracleLimitError surfaces when --algo oracle faces an instance too
        # large for exact recomputation (--opt auto merely warns and skips).
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
