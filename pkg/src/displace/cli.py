"""Command-line frontend.

Subcommands cover the full pipeline: solving for the maximum displacement
(JSON), per-level envelopes (JSON or CSV sweep), lattice exploration of
realizable aggregates (CSV), brute-force agreement checks, synthetic data
generation, scaling benchmarks, and the greedy-baseline comparison.  CSV
uses '.' decimals and LF line endings; every subcommand is deterministic for a
fixed --seed.  Exit codes: 0 success, 1 runtime error, 2 infeasible input,
64 usage, 65 parse error, 69 resource cap exceeded.
"""

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _plots
from .ballots import construct_ballots, verify_manipulation
from .baselines import greedy_promote
from .data import gen_synthetic_scores, parse_preflib, sample_mallows, MallowsConfig
from .election import HonestScores, Profile, boundary_sets_fast, tally
from .envelope import envelope_sweep, evaluate_level, maximize_displacement
from .errors import (
    BudgetOverflowError,
    CountMismatchError,
    DisplaceError,
    EmptyBoundaryError,
    EmptyVectorError,
    IncompleteRankingError,
    InfeasibleInputError,
    LevelOutOfRangeError,
    MalformedLineError,
    NotCertifiedError,
    NotNonincreasingError,
    SumsetTooLargeError,
    TooLargeError,
)
from .oracle import block_hlp_member, realizable
from .reference import brute_force_k_star
from .scoring import aggregate_capacities, extract_ap_ladder, scoring_from_spec, validate_scoring_vector

EX_OK = 0
EX_ERROR = 1
EX_INFEASIBLE = 2
EX_USAGE = 64
EX_PARSE = 65
EX_RESOURCE = 69

_PARSE_ERRORS = (
    MalformedLineError,
    IncompleteRankingError,
    CountMismatchError,
    NotNonincreasingError,
    EmptyVectorError,
)
_INFEASIBLE_ERRORS = (
    InfeasibleInputError,
    LevelOutOfRangeError,
    EmptyBoundaryError,
    NotCertifiedError,
)
_RESOURCE_ERRORS = (TooLargeError, SumsetTooLargeError, BudgetOverflowError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _worker_count():
    raw = os.environ.get("DISPLACE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_trials(fn, items):
    """Run trials, optionally across worker threads, merged in trial order."""
    workers = _worker_count()
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _load_scores(path) -> HonestScores:
    values = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(int(line))
            except ValueError:
                raise MalformedLineError(lineno, f"line {lineno}: expected one integer per line")
    if not values:
        raise MalformedLineError(0, "scores file is empty")
    return HonestScores(scores=np.asarray(values, dtype=np.int64))


def _load_profile(path) -> Profile:
    with open(path, "r", encoding="utf-8") as handle:
        profile, _ = parse_preflib(handle.read())
    return profile


def write_soc(profile: Profile, out) -> None:
    """Serialize a profile in the strict-complete-order text format (1-based ids)."""
    out.write(f"# NUMBER ALTERNATIVES: {profile.num_candidates}\n")
    out.write(f"# NUMBER VOTERS: {profile.num_voters}\n")
    for mult, ranking in profile.ballots:
        ids = ",".join(str(c + 1) for c in ranking)
        out.write(f"{mult}: {ids}\n")


def format_soc(profile: Profile) -> str:
    buf = io.StringIO()
    write_soc(profile, buf)
    return buf.getvalue()


def _resolve_election(args):
    if getattr(args, "scores", None):
        scores = _load_scores(args.scores)
        p = scoring_from_spec(args.scoring, scores.num_candidates)
        return scores, p
    profile = _load_profile(args.profile)
    p = scoring_from_spec(args.scoring, profile.num_candidates)
    return tally(profile, p), p


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _emit_csv(path, header, rows):
    handle, owned = _open_out(path)
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if owned:
            handle.close()


# ---------------------------------------------------------------- commands


def _cmd_max_displacement(args):
    scores, p = _resolve_election(args)
    result = maximize_displacement(scores, p, args.k, args.m, strategy=args.strategy)
    payload = {
        "k_star": result.k_star,
        "b_min": result.b_min_star,
        "b_max": result.b_max_star,
    }
    if args.construct or args.verify:
        level = result.k_star
        cutoff = args.cutoff
        if cutoff is None:
            cutoff = result.b_min_star if level >= 1 else 0
        elif level >= 1 and not (result.b_min_star <= cutoff <= result.b_max_star):
            raise NotCertifiedError(
                f"cutoff {cutoff} outside certified interval "
                f"[{result.b_min_star}, {result.b_max_star}]"
            )
        boundary = boundary_sets_fast(scores, args.k, level)
        ballots = construct_ballots(scores, boundary, p, max(args.m, 0), cutoff)
        if args.construct:
            payload["cutoff"] = cutoff
            payload["ballots"] = [list(r) for r in ballots.rankings]
        if args.verify:
            report = verify_manipulation(scores, ballots, p, args.k, boundary, cutoff)
            payload["verification"] = {
                "separated": report.separated,
                "min_outsider_final": report.min_outsider_final,
                "max_weak_winner_final": report.max_weak_winner_final,
                "outsiders_in_top_k": report.outsiders_in_top_k,
                "displaced_count": report.displaced_count,
            }
    print(json.dumps(payload))
    return EX_OK


def _envelope_row(res):
    return {
        "level": res.level,
        "feasible": res.feasible,
        "b_min": res.b_min,
        "b_max": res.b_max,
        "boost_b_max": res.boost_b_max,
        "suppress_b_min": res.suppress_b_min,
    }


def _cmd_envelope(args):
    scores, p = _resolve_election(args)
    if args.sweep_levels:
        results = envelope_sweep(scores, p, args.k, args.m)
        rows = [_envelope_row(r) for r in results]
        _emit_csv(
            args.out,
            ["level", "feasible", "b_min", "b_max", "boost_b_max", "suppress_b_min"],
            [
                [
                    r["level"],
                    int(r["feasible"]),
                    "" if r["b_min"] is None else r["b_min"],
                    "" if r["b_max"] is None else r["b_max"],
                    "" if r["boost_b_max"] is None else r["boost_b_max"],
                    "" if r["suppress_b_min"] is None else r["suppress_b_min"],
                ]
                for r in rows
            ],
        )
        if args.plot:
            _plots.plot_envelope(rows, args.plot)
        return EX_OK
    if args.level is None:
        raise InfeasibleInputError("need --level or --sweep-levels")
    res = evaluate_level(scores, p, args.k, args.m, args.level)
    print(json.dumps(_envelope_row(res)))
    return EX_OK


def _cmd_lattice(args):
    segment = [int(tok) for tok in args.ladder.split(",")]
    ladder = extract_ap_ladder(validate_scoring_vector(segment).values)
    m = args.m
    caps = aggregate_capacities([ladder] * m)
    k = ladder.length
    lo = m * min(ladder.scores())
    hi = m * max(ladder.scores())
    total = caps.total
    width = hi - lo + 1
    if width ** max(1, k - 1) > args.max_points:
        raise TooLargeError(
            f"{width ** max(1, k - 1)} grid points exceed --max-points {args.max_points}"
        )

    rows = []

    def visit(prefix, remaining):
        depth = len(prefix)
        if depth == k - 1:
            if lo <= remaining <= hi:
                rows.append(tuple(prefix) + (remaining,))
            return
        tail = k - depth - 1
        for v in range(lo, hi + 1):
            if lo * tail <= remaining - v <= hi * tail:
                visit(prefix + [v], remaining - v)

    if k == 1:
        rows.append((total,))
    else:
        visit([], total)

    tagged = []
    for y in rows:
        if realizable(y, caps):
            tag = "realizable"
        elif block_hlp_member(y, caps):
            tag = "prefix-only"
        else:
            tag = "outside"
        record = {f"y{i + 1}": y[i] for i in range(k)}
        record["u"] = y[0]
        record["v"] = y[0] + (y[1] if k > 1 else 0)
        record["tag"] = tag
        tagged.append(record)

    if args.project:
        header = ["u", "v", "tag"]
        out_rows = [[r["u"], r["v"], r["tag"]] for r in tagged]
    else:
        header = [f"y{i + 1}" for i in range(k)] + ["tag"]
        out_rows = [[r[f"y{i + 1}"] for i in range(k)] + [r["tag"]] for r in tagged]
    _emit_csv(args.out, header, out_rows)
    if args.plot:
        _plots.plot_lattice(tagged, args.plot, projected=True)
    return EX_OK


_RULE_ALIASES = {"truncated": None, "borda3": "scaled:3:borda"}


def _rule_spec(name, x):
    if name == "truncated":
        return f"truncborda:{max(1, x // 2)}"
    return _RULE_ALIASES.get(name) or name


def _cmd_brute_check(args):
    rules = [tok.strip() for tok in args.rules.split(",") if tok.strip()]
    rng = np.random.default_rng(np.random.PCG64(args.seed))
    trial_seeds = rng.integers(0, 2**63 - 1, size=args.trials)

    def run(trial):
        local = np.random.default_rng(np.random.PCG64(int(trial_seeds[trial])))
        x = int(local.integers(3, args.max_x + 1))
        rule = rules[int(local.integers(0, len(rules)))]
        p = scoring_from_spec(_rule_spec(rule, x), x)
        n = int(local.integers(1, 9))
        rankings = [tuple(local.permutation(x)) for _ in range(n)]
        from .election import make_profile

        profile = make_profile(rankings, num_candidates=x)
        scores = tally(profile, p)
        k = int(local.integers(1, x))
        m = int(local.integers(0, args.max_m + 1))
        got = maximize_displacement(scores, p, k, m).k_star
        want = brute_force_k_star(scores, p, m, k)
        return rule, got, want

    results = _map_trials(run, range(args.trials))
    agree = sum(1 for _, got, want in results if got == want)
    per_rule = {}
    for rule, got, want in results:
        ok, total = per_rule.get(rule, (0, 0))
        per_rule[rule] = (ok + (got == want), total + 1)
    print(f"agreement: {agree}/{args.trials}")
    for rule in sorted(per_rule):
        ok, total = per_rule[rule]
        print(f"  {rule}: {ok}/{total}")
    if agree != args.trials:
        for rule, got, want in results:
            if got != want:
                print(f"  MISMATCH rule={rule} solver={got} brute={want}", file=sys.stderr)
        return EX_ERROR
    return EX_OK


def _cmd_gen_mallows(args):
    config = MallowsConfig(
        num_candidates=args.x, num_voters=args.n, dispersion=args.phi, seed=args.seed
    )
    profile = sample_mallows(config)
    handle, owned = _open_out(args.out)
    try:
        write_soc(profile, handle)
    finally:
        if owned:
            handle.close()
    return EX_OK


def _cmd_gen_scores(args):
    scores = gen_synthetic_scores(args.x, distribution=args.dist, seed=args.seed)
    handle, owned = _open_out(args.out)
    try:
        for value in scores.scores:
            handle.write(f"{int(value)}\n")
    finally:
        if owned:
            handle.close()
    return EX_OK


def _cmd_bench(args):
    xs = [int(tok) for tok in args.x.split(",")]
    ms = [int(tok) for tok in args.m.split(",")]
    rows = []
    for x in xs:
        scores = gen_synthetic_scores(x, distribution=args.dist, seed=args.seed)
        p = scoring_from_spec("borda", x)
        k = args.k if args.k else max(1, min(100, x // 2))
        for m in ms:
            start = time.perf_counter()
            maximize_displacement(scores, p, k, m)
            elapsed = (time.perf_counter() - start) * 1000.0
            rows.append({"x": x, "m": m, "milliseconds": round(elapsed, 3)})
    _emit_csv(args.out, ["x", "m", "milliseconds"], [[r["x"], r["m"], r["milliseconds"]] for r in rows])
    if args.plot:
        _plots.plot_bench(rows, args.plot)
    return EX_OK


def _cmd_baseline_compare(args):
    ms = [int(tok) for tok in args.m.split(",")]
    rng = np.random.default_rng(np.random.PCG64(args.seed))
    trial_seeds = rng.integers(0, 2**63 - 1, size=args.trials)

    def run(trial):
        seed = int(trial_seeds[trial])
        config = MallowsConfig(
            num_candidates=args.x, num_voters=args.n_voters, dispersion=args.phi, seed=seed
        )
        profile = sample_mallows(config)
        p = scoring_from_spec("borda", args.x)
        scores = tally(profile, p)
        out = []
        for m in ms:
            start = time.perf_counter()
            k_star = maximize_displacement(scores, p, args.k, m).k_star
            ms_oracle = (time.perf_counter() - start) * 1000.0
            start = time.perf_counter()
            displaced, _ = greedy_promote(scores, p, m, args.k)
            ms_greedy = (time.perf_counter() - start) * 1000.0
            out.append(
                {
                    "trial": trial,
                    "m": m,
                    "k_star_oracle": k_star,
                    "k_greedy": displaced,
                    "ms_oracle": round(ms_oracle, 3),
                    "ms_greedy": round(ms_greedy, 3),
                }
            )
        return out

    rows = [row for chunk in _map_trials(run, range(args.trials)) for row in chunk]
    _emit_csv(
        args.out,
        ["m", "k_star_oracle", "k_greedy", "ms_oracle", "ms_greedy"],
        [[r["m"], r["k_star_oracle"], r["k_greedy"], r["ms_oracle"], r["ms_greedy"]] for r in rows],
    )
    if args.plot:
        _plots.plot_baseline(rows, args.plot)
    return EX_OK


# ---------------------------------------------------------------- parser


def build_parser():
    parser = _Parser(prog="displace", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_election_args(sp):
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--scores", help="CSV of honest scores, one integer per line")
        src.add_argument("--profile", help="preference profile in strict-order text format")
        sp.add_argument("--scoring", required=True, help="scoring rule, e.g. borda or vec:3,2,1,0")
        sp.add_argument("-k", type=int, required=True, help="committee size")
        sp.add_argument("-m", type=int, required=True, help="coalition size")

    sp = sub.add_parser("max-displacement", help="solve for the maximum displacement")
    add_election_args(sp)
    sp.add_argument("--strategy", choices=("binary", "linear"), default="binary")
    sp.add_argument("--construct", action="store_true", help="include witness ballots")
    sp.add_argument("--verify", action="store_true", help="include a recount report")
    sp.add_argument("--cutoff", type=int, help="construct at this cutoff instead of b_min")
    sp.set_defaults(handler=_cmd_max_displacement)

    sp = sub.add_parser("envelope", help="feasible cutoff interval at one or all levels")
    add_election_args(sp)
    sp.add_argument("--level", type=int, help="displacement level to evaluate")
    sp.add_argument("--sweep-levels", action="store_true", help="emit CSV for all levels")
    sp.add_argument("--out", help="output file (default stdout)")
    sp.add_argument("--plot", help="also render the envelope plot to this file")
    sp.set_defaults(handler=_cmd_envelope)

    sp = sub.add_parser("lattice", help="tag integer aggregates of a replicated ladder")
    sp.add_argument("--ladder", required=True, help="comma-separated nonincreasing scores")
    sp.add_argument("-m", type=int, required=True, help="number of ballot copies")
    sp.add_argument("--project", action="store_true", help="emit prefix-sum projection (u, v)")
    sp.add_argument("--max-points", type=int, default=200000)
    sp.add_argument("--out", help="output file (default stdout)")
    sp.add_argument("--plot", help="also render the lattice plot to this file")
    sp.set_defaults(handler=_cmd_lattice)

    sp = sub.add_parser("brute-check", help="agreement of the solver with brute force")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--max-x", type=int, default=6)
    sp.add_argument("--max-m", type=int, default=2)
    sp.add_argument("--rules", default="borda,borda3,truncated,plurality,321")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(handler=_cmd_brute_check)

    sp = sub.add_parser("gen-mallows", help="sample a synthetic preference profile")
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--phi", type=float, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="output file (default stdout)")
    sp.set_defaults(handler=_cmd_gen_mallows)

    sp = sub.add_parser("gen-scores", help="generate a synthetic score array")
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--dist", default="uniform:0:1000000")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="output file (default stdout)")
    sp.set_defaults(handler=_cmd_gen_scores)

    sp = sub.add_parser("bench", help="time the solver across election sizes")
    sp.add_argument("--x", required=True, help="comma-separated candidate counts")
    sp.add_argument("--m", required=True, help="comma-separated coalition sizes")
    sp.add_argument("--k", type=int, help="committee size (default min(100, x/2))")
    sp.add_argument("--dist", default="uniform:0:1000000")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="output file (default stdout)")
    sp.add_argument("--plot", help="also render the scaling plot to this file")
    sp.set_defaults(handler=_cmd_bench)

    sp = sub.add_parser("baseline-compare", help="exact solver vs the greedy baseline")
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--x", type=int, default=60)
    sp.add_argument("--n-voters", type=int, default=200)
    sp.add_argument("--phi", type=float, default=0.8)
    sp.add_argument("--k", type=int, default=30)
    sp.add_argument("--m", default="1,2,4,8,16")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="output file (default stdout)")
    sp.add_argument("--plot", help="also render the comparison plot to this file")
    sp.set_defaults(handler=_cmd_baseline_compare)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EX_USAGE
    try:
        return args.handler(args)
    except _PARSE_ERRORS as exc:
        print(f"displace: parse error: {exc}", file=sys.stderr)
        return EX_PARSE
    except _RESOURCE_ERRORS as exc:
        print(f"displace: resource cap: {exc}", file=sys.stderr)
        return EX_RESOURCE
    except _INFEASIBLE_ERRORS as exc:
        print(f"displace: infeasible input: {exc}", file=sys.stderr)
        return EX_INFEASIBLE
    except (DisplaceError, ValueError, OSError) as exc:
        print(f"displace: error: {exc}", file=sys.stderr)
        return EX_ERROR


def main():
    raise SystemExit(run())
