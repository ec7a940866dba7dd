"""Command line front end.

Subcommands:

  value        exact value of a game (optionally repeated) with the
               lexicographically first optimal strategy
  density      extremal densities of the structure families, or a WCNF dump
               of the instance for an external MaxSAT solver
  eqn          maximum forbidden-configuration-free density of a repeated
               question support, with the extremal witness
  repeat       summarise (and optionally solve) a repeated game
  verify       re-derive the equivalences between repeated values and
               densities on concrete instances and report PASS/FAIL
  fuzz-prop34  sample random product strategies for a repeated game and
               check every winning set is forbidden-configuration-free

Every command is deterministic given its arguments and seed: reports never
include timestamps, rationals print as num/den in lowest terms, and all
randomness flows from an explicit --seed through a splitmix64 stream.

Results are cached append-only under $REPLAB_CACHE (or .replab-cache);
--recheck re-verifies a cached record against a fresh recomputation of its
cheap certificate instead of trusting the file.

Exit codes: 0 success, 1 verification failure, 2 malformed input, 3 budget
exceeded, 4 fuzz precondition not met.  --threads is accepted for interface
stability but execution is always sequential.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from . import forbidden, structures
from .cache import ResultsCache, canonical_key
from .errors import BudgetExceededError, ReplabError, SchemaError
from .fields import FiniteField
from .games import (DEFAULT_STRATEGY_BUDGET, Game, evaluate, exact_value,
                    game_from_json, preset_game, strategy_from_json,
                    strategy_to_json, unit_tuples)
from .records import DensityRecord, ValueRecord, fraction_str
from .repetition import independent_strategy, repeat
from .rng import SplitMix64
from .search import export_wcnf
from .structures import ghz_support, grid_question_set

PRESETS = ("anticorr", "unitvec", "ghz", "grid")


class VerifyFailure(ReplabError):
    """A verify subcommand found a mismatch, or a cached record failed its
    recheck."""


class PreconditionFailure(ReplabError):
    """A fuzz run was refused because its precondition does not hold."""


# -- shared helpers ----------------------------------------------------------


def _add_cache_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="print the record as JSON")
    p.add_argument("--cache-dir", default=None,
                   help="cache root (default: $REPLAB_CACHE or .replab-cache)")
    p.add_argument("--no-cache", action="store_true", help="skip the results cache")
    p.add_argument("--recheck", action="store_true",
                   help="re-verify cached records instead of trusting them")


def _add_game_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--game", default=None, help="path to a game JSON file")
    p.add_argument("--preset", default=None, choices=PRESETS)
    p.add_argument("--q", type=int, default=3, help="player count for anticorr/unitvec")
    p.add_argument("--p", type=int, default=2, help="field characteristic for grid")
    p.add_argument("--r", type=int, default=1, help="field extension degree for grid")
    p.add_argument("--k", type=int, default=2, help="free player count for grid")


def _load_game(args) -> tuple[Game, str, dict]:
    """Game plus a (label, params) pair identifying it for the cache."""
    if args.game and args.preset:
        raise SchemaError("give either --game or --preset, not both")
    if args.game:
        try:
            with open(args.game, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise SchemaError(f"cannot read game file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(f"game file is not JSON: {exc}") from exc
        game = game_from_json(doc)
        digest = hashlib.sha256(
            json.dumps(doc, sort_keys=True).encode("utf-8")).hexdigest()[:16]
        return game, "file", {"sha": digest}
    if not args.preset:
        raise SchemaError("a game is required: --game FILE or --preset NAME")
    if args.preset in ("anticorr", "unitvec"):
        return preset_game(args.preset, q=args.q), args.preset, {"q": args.q}
    if args.preset == "ghz":
        return preset_game("ghz"), "ghz", {}
    return (preset_game("grid", p=args.p, r=args.r, k=args.k), "grid",
            {"p": args.p, "r": args.r, "k": args.k})


def _preset_support(args) -> tuple[tuple, tuple, str, dict]:
    """Question support and alphabets of a preset, for eqn and verify."""
    name = args.preset
    if name in ("anticorr", "unitvec"):
        q = args.q
        return unit_tuples(q), ((0, 1),) * q, name, {"q": q}
    if name == "ghz":
        return ghz_support(), ((0, 1),) * 3, "ghz", {}
    if name == "grid":
        field = FiniteField(args.p, args.r)
        support = grid_question_set(field, args.k)
        alphabets = (tuple(field.elements),) * (args.k + args.r)
        return support, alphabets, "grid", {"p": args.p, "r": args.r, "k": args.k}
    raise SchemaError(f"unknown preset {name!r}")


def _cache(args) -> ResultsCache | None:
    if args.no_cache:
        return None
    return ResultsCache(args.cache_dir)


def _with_cache(args, kind: str, params: dict, compute, verify) -> tuple[dict, str]:
    """Fetch or compute a record.  verify(record) guards --recheck hits."""
    cache = _cache(args)
    key = canonical_key(kind, params)
    if cache is not None:
        existing = cache.get(key)
        if existing is not None:
            if args.recheck and not verify(existing):
                raise VerifyFailure(f"cached record failed recheck: {key}")
            return existing, "cached"
    record = compute()
    if cache is not None:
        record, _ = cache.put(key, record)
    return record, "computed"


def _strip_timestamp(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "timestamp"}


def _emit(args, record: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(_strip_timestamp(record), sort_keys=True, indent=2))
    else:
        print("\n".join(lines))


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise SchemaError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _tuplify(obj):
    if isinstance(obj, list):
        return tuple(_tuplify(v) for v in obj)
    return obj


# -- value -------------------------------------------------------------------


def cmd_value(args) -> int:
    game, label, params = _load_game(args)
    base = game
    if args.repeat > 1:
        game = repeat(base, args.repeat)
    params = dict(params, repeat=args.repeat)

    def compute() -> dict:
        result = exact_value(game, budget=args.budget)
        return ValueRecord(
            game=label,
            params=params,
            value=result.value,
            strategy=strategy_to_json(game, result.strategy),
            method="exact-bb",
        ).to_json()

    def verify(doc: dict) -> bool:
        strategy = strategy_from_json(doc["strategy"])
        return evaluate(game, strategy) == Fraction(doc["value"])

    doc, status = _with_cache(args, "value", dict(params, game=label), compute, verify)
    record = ValueRecord.from_json(doc)
    lines = record.report_lines() + [f"status:        {status}"]
    _emit(args, doc, lines)
    return 0


# -- density -------------------------------------------------------------------


def _density_params(args) -> dict:
    if args.family == "line":
        return {"q": args.q, "n": args.n}
    if args.family in ("square", "corner"):
        return {"n": args.n}
    return {"p": args.p, "r": args.r, "k": args.k, "n": args.n}


def _density_family(args):
    if args.family == "line":
        return structures.lines(args.q, args.n)
    if args.family == "square":
        return structures.squares(args.n)
    if args.family == "corner":
        return structures.corners(args.n)
    return structures.grids(FiniteField(args.p, args.r), args.k, args.n)


def _density_compute(args) -> DensityRecord:
    if args.family == "line":
        return structures.r_line(args.q, args.n, method=args.method)
    if args.family == "square":
        return structures.r_square(args.n)
    if args.family == "corner":
        return structures.r_corner(args.n)
    return structures.r_grid(FiniteField(args.p, args.r), args.k, args.n)


def _density_verify(args, doc: dict) -> bool:
    record = DensityRecord.from_json(doc)
    if record.witness is None:
        fresh = _density_compute(args)
        return record.value == fresh.value
    family = _density_family(args)
    try:
        indices = [family.index(_tuplify(p)) for p in record.witness]
    except KeyError:
        return False
    from .search import verify_free

    return (len(indices) == record.witness_size
            and record.value == Fraction(record.witness_size, len(family.universe))
            and verify_free(indices, family.configurations()))


def cmd_density(args) -> int:
    if args.wcnf:
        family = _density_family(args)
        hyper = family.to_hypergraph(with_generators=False)
        text = export_wcnf(hyper)
        with open(args.wcnf, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote WCNF: {len(family.universe)} points, "
              f"{len(hyper.edges)} hard clauses -> {args.wcnf}")
        return 0
    params = _density_params(args)

    def compute() -> dict:
        return _density_compute(args).to_json()

    doc, status = _with_cache(args, "density", dict(params, family=args.family),
                              compute, lambda d: _density_verify(args, d))
    record = DensityRecord.from_json(doc)
    _emit(args, doc, record.report_lines() + [f"status:        {status}"])
    return 0


# -- eqn -----------------------------------------------------------------------


def _eqn_verify(support, n, doc: dict) -> bool:
    record = DensityRecord.from_json(doc)
    witness = [_tuplify(w) for w in (record.witness or [])]
    if len(witness) != record.witness_size:
        return False
    if record.value != Fraction(record.witness_size, len(support) ** n):
        return False
    return forbidden.find_forbidden(list(support), n, witness) is None


def cmd_eqn(args) -> int:
    support, _, label, params = _preset_support(args)
    n = args.n
    if args.wcnf:
        hyper = forbidden.forbidden_hypergraph(list(support), n,
                                               point_budget=args.point_budget)
        text = export_wcnf(hyper)
        with open(args.wcnf, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote WCNF: {hyper.size} points, "
              f"{len(hyper.edges)} hard clauses -> {args.wcnf}")
        return 0
    params = dict(params, preset=label, n=n)

    def compute() -> dict:
        record = forbidden.compute_eq(list(support), n,
                                      point_budget=args.point_budget)
        return record.to_json()

    doc, status = _with_cache(args, "eqn", params, compute,
                              lambda d: _eqn_verify(support, n, d))
    record = DensityRecord.from_json(doc)
    if args.emit_witness:
        payload = {
            "support": [list(x) for x in support],
            "n": n,
            "witness": sorted([list(map(int, w)) for w in (record.witness or [])]),
            "value": fraction_str(record.value),
        }
        with open(args.emit_witness, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
    _emit(args, doc, record.report_lines() + [f"status:        {status}"])
    return 0


# -- repeat ----------------------------------------------------------------------


def cmd_repeat(args) -> int:
    base, label, params = _load_game(args)
    game = repeat(base, args.n)
    payload = {
        "game": label,
        "params": params,
        "n": args.n,
        "players": base.k,
        "base_support": len(base.support),
        "support": len(game.support),
        "question_alphabets": [len(a) for a in game.question_alphabets],
        "answer_alphabets": [len(a) for a in game.answer_alphabets],
    }
    lines = [
        f"game:              {label} {params}",
        f"players:           {base.k}",
        f"rounds:            {args.n}",
        f"support:           {len(base.support)} -> {len(game.support)}",
        f"question tuples:   {[len(a) for a in game.question_alphabets]}",
        f"answer tuples:     {[len(a) for a in game.answer_alphabets]}",
    ]
    if args.solve:
        result = exact_value(game, budget=args.budget)
        payload["value"] = fraction_str(result.value)
        payload["strategy"] = strategy_to_json(game, result.strategy)
        lines.append(f"value:             {fraction_str(result.value)}")
    _emit(args, payload, lines)
    return 0


# -- verify ----------------------------------------------------------------------


def _verify_report(args, name: str, rows: list[tuple[str, bool]]) -> int:
    ok = all(good for _, good in rows)
    lines = [("PASS " if good else "FAIL ") + text for text, good in rows]
    payload = {"check": name, "results": [
        {"case": text, "ok": good} for text, good in rows]}
    _emit(args, payload, lines)
    if not ok:
        raise VerifyFailure(f"{name}: {sum(not g for _, g in rows)} case(s) failed")
    return 0


def cmd_verify(args) -> int:
    if args.check == "dhj":
        rows = []
        for n in _parse_range(args.n):
            eq = forbidden.compute_eq(list(unit_tuples(args.q)), n)
            rl = structures.r_line(args.q, n)
            rows.append((
                f"dhj q={args.q} n={n}: density {fraction_str(eq.value)} "
                f"vs line bound {fraction_str(rl.value)}",
                eq.value == rl.value))
        return _verify_report(args, "dhj", rows)
    if args.check == "square":
        rows = []
        for n in _parse_range(args.n):
            eq = forbidden.compute_eq(list(ghz_support()), n)
            rs = structures.r_square(n)
            rows.append((
                f"square n={n}: density {fraction_str(eq.value)} "
                f"vs square bound {fraction_str(rs.value)}",
                eq.value == rs.value))
        return _verify_report(args, "square", rows)
    if args.check == "grid":
        field = FiniteField(args.p, args.r)
        rows = []
        for n in _parse_range(args.n):
            eq = forbidden.compute_eq(list(grid_question_set(field, args.k)), n)
            rg = structures.r_grid(field, args.k, n)
            rows.append((
                f"grid p={args.p} r={args.r} k={args.k} n={n}: "
                f"density {fraction_str(eq.value)} vs grid bound {fraction_str(rg.value)}",
                eq.value == rg.value))
        return _verify_report(args, "grid", rows)
    if args.check == "val-bound":
        game, label, _ = _load_game(args)
        weights = list(game.weights)
        if len(set(weights)) != 1:
            raise SchemaError("val-bound needs a uniformly weighted support")
        base_val = exact_value(game, budget=args.budget)
        rows = []
        for n in _parse_range(args.n):
            rep = repeat(game, n)
            val = exact_value(rep, budget=args.budget)
            eq = forbidden.compute_eq(list(game.support), n)
            indep = evaluate(rep, independent_strategy(base_val.strategy, n))
            ok = (base_val.value**n == indep <= val.value <= eq.value)
            rows.append((
                f"val-bound {label} n={n}: {fraction_str(base_val.value)}**{n} "
                f"<= {fraction_str(val.value)} <= {fraction_str(eq.value)}",
                ok))
        return _verify_report(args, "val-bound", rows)
    if args.check == "thm-answer-game":
        support, alphabets, label, _ = _preset_support(args)
        span = _parse_range(args.n)
        if len(span) != 1:
            raise SchemaError("thm-answer-game verifies one round count at a time")
        n = span[0]
        eq = forbidden.compute_eq(list(support), n)
        witness = [tuple(w) for w in eq.witness]
        answer_game = forbidden.build_answer_game(alphabets, support, n, witness)
        rows = []
        single = exact_value(answer_game, budget=args.budget)
        rows.append((
            f"thm {label} n={n}: single-shot value {fraction_str(single.value)} < 1",
            single.value < 1))
        rep = repeat(answer_game, n)
        strat = forbidden.strategy_from_witness(support, n)
        lower = evaluate(rep, strat)
        rows.append((
            f"thm {label} n={n}: witness strategy attains {fraction_str(lower)} "
            f"= density {fraction_str(eq.value)}",
            lower == eq.value))
        rows.append((
            f"thm {label} n={n}: witness winning set is forbidden-free",
            forbidden.check_winning_set_free(rep, strat)))
        try:
            full = exact_value(rep, budget=args.budget)
            rows.append((
                f"thm {label} n={n}: full search value {fraction_str(full.value)} "
                f"= density {fraction_str(eq.value)}",
                full.value == eq.value))
        except BudgetExceededError:
            rows.append((
                f"thm {label} n={n}: full search skipped (budget); upper bound "
                "holds since winning sets of product strategies are "
                "forbidden-free", True))
        return _verify_report(args, "thm-answer-game", rows)
    raise SchemaError(f"unknown check {args.check!r}")


# -- fuzz ----------------------------------------------------------------------


def _random_strategy(game: Game, rng: SplitMix64):
    from .games import Strategy

    tables = []
    for j in range(game.k):
        answers = list(game.answer_alphabets[j])
        table = {}
        for q in game.question_domain(j):
            table[q] = answers[rng.below(len(answers))]
        tables.append(table)
    return Strategy.from_tables(tables)


def cmd_fuzz(args) -> int:
    base, label, params = _load_game(args)
    base_val = exact_value(base, budget=args.budget)
    if base_val.value >= 1:
        raise PreconditionFailure(
            "fuzz-prop34 needs a base game of value below 1; "
            f"{label} has value {fraction_str(base_val.value)}")
    game = repeat(base, args.n)
    root = SplitMix64(args.seed)
    violations = 0
    first_bad = None
    for trial in range(args.trials):
        rng = root.split()
        strategy = _random_strategy(game, rng)
        if not forbidden.check_winning_set_free(game, strategy):
            violations += 1
            if first_bad is None:
                first_bad = {"trial": trial,
                             "strategy": strategy_to_json(game, strategy)}
    payload = {
        "game": label,
        "params": params,
        "n": args.n,
        "seed": args.seed,
        "trials": args.trials,
        "violations": violations,
    }
    if first_bad is not None:
        payload["counterexample"] = first_bad
    lines = [
        f"game:        {label} {params}",
        f"rounds:      {args.n}",
        f"seed:        {args.seed}",
        f"trials:      {args.trials}",
        f"violations:  {violations}",
    ]
    _emit(args, payload, lines)
    return 0 if violations == 0 else 1


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="replab",
        description="exact game values, parallel repetition, and "
                    "forbidden-configuration densities")
    parser.add_argument("--threads", type=int, default=1,
                        help="accepted for interface stability; runs sequentially")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("value", help="exact value of a (repeated) game")
    _add_game_source(p)
    p.add_argument("--repeat", type=int, default=1, help="repetition count")
    p.add_argument("--budget", type=int, default=DEFAULT_STRATEGY_BUDGET)
    _add_cache_flags(p)
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("density", help="extremal structure densities")
    p.add_argument("family", choices=("line", "square", "corner", "grid"))
    p.add_argument("--q", type=int, default=2, help="symbol count for line")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--method", choices=("auto", "search", "closed-form"),
                   default="auto", help="line family only")
    p.add_argument("--wcnf", default=None,
                   help="write the instance as WCNF instead of solving")
    _add_cache_flags(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("eqn", help="maximum forbidden-free density of a support")
    p.add_argument("--preset", required=True, choices=PRESETS)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--point-budget", type=int, default=128)
    p.add_argument("--emit-witness", default=None, help="write the witness JSON here")
    p.add_argument("--wcnf", default=None,
                   help="write the instance as WCNF instead of solving")
    _add_cache_flags(p)
    p.set_defaults(func=cmd_eqn)

    p = sub.add_parser("repeat", help="summarise or solve a repeated game")
    _add_game_source(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--solve", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_STRATEGY_BUDGET)
    _add_cache_flags(p)
    p.set_defaults(func=cmd_repeat)

    p = sub.add_parser("verify", help="re-derive density/value equivalences")
    p.add_argument("check", choices=("dhj", "square", "grid", "val-bound",
                                     "thm-answer-game"))
    _add_game_source(p)
    p.add_argument("--n", default="1", help="round count or range like 1..2")
    p.add_argument("--budget", type=int, default=DEFAULT_STRATEGY_BUDGET)
    _add_cache_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fuzz-prop34",
                       help="random product strategies; winning sets must be "
                            "forbidden-configuration-free")
    _add_game_source(p)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_STRATEGY_BUDGET)
    _add_cache_flags(p)
    p.set_defaults(func=cmd_fuzz)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PreconditionFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except VerifyFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ReplabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
