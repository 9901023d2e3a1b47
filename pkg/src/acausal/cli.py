"""Command-line entry point: ``acausal <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 budget exceeded, 4 a claim that
should hold by construction was falsified.
"""
from __future__ import annotations

import argparse
import json
import os
import signal
import sys
import tempfile
from contextlib import contextmanager
from pathlib import Path

from . import choi, classify, consistency, games, lp, polytope
from .errors import AcausalError, BudgetExceededError, InvalidInputError
from .ratmat import format_rational
from .scenario import Scenario, load_environment, process_to_det_function, read_process

BUDGET_ENV = "ACAUSAL_BUDGET_SECS"
# double description without --full-dd: at most this many coordinates and parties
DD_DEFAULT_LIMIT = 81
DD_DEFAULT_PARTIES = 2


def _scenario(args) -> Scenario:
    return Scenario(args.n, args.d)


def _emit(args, text: str, payload: dict) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _no_cdd(args) -> None:
    if args.format == "cdd":
        raise InvalidInputError(f"--format cdd is not available for '{args.command}'")


# ---------------------------------------------------------------------------

def cmd_dim(args) -> int:
    p = polytope.build_hrep(_scenario(args))
    dim = polytope.polytope_dimension(p)
    facets = polytope.facet_count(p)
    if args.format == "cdd":
        sys.stdout.write(polytope.format_cdd_hrep(p))
    else:
        _emit(args, f"dimension {dim}, facets {facets}", {"dimension": dim, "facets": facets})
    return 0


def _write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def cmd_vertices(args) -> int:
    sc = _scenario(args)
    if args.deterministic_only:
        fns = polytope.enumerate_deterministic_vertices(
            sc, threads=args.threads, budget_seconds=args.budget)
        verts = sorted((polytope.Vertex.from_point(polytope.function_to_point(g)) for g in fns),
                       key=lambda v: v.point, reverse=True)
    else:
        if (sc.D * sc.D > DD_DEFAULT_LIMIT or sc.n > DD_DEFAULT_PARTIES) and not args.full_dd:
            raise InvalidInputError(
                f"full vertex enumeration for n={sc.n}, d={sc.d} is hours-scale; "
                "pass --full-dd or --deterministic-only")
        verts = polytope.enumerate_vertices_dd(polytope.build_hrep(sc), budget_seconds=args.budget)
    ndet = sum(v.deterministic for v in verts)
    if args.format == "cdd":
        text = polytope.format_cdd_vrep(verts)
    elif args.format == "json":
        text = json.dumps({"n": sc.n, "d": sc.d, "vertices": len(verts), "deterministic": ndet,
                           "points": [[format_rational(x) for x in v.point] for v in verts]},
                          sort_keys=True) + "\n"
    else:
        text = polytope.format_vertex_list(sc, verts)
    if args.output:
        _write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    print(f"{len(verts)} vertices ({ndet} deterministic)", file=sys.stderr)
    return 0


def cmd_check(args) -> int:
    _no_cdd(args)
    sc, m = read_process(args.file)
    verdict = consistency.check_nonnegativity(m)
    if verdict:
        verdict = consistency.check_total_probability(
            m, consistency.family_for(sc.d, args.mode), n=sc.n)
    payload = {"consistent": verdict.consistent}
    if verdict.entry is not None:
        payload["entry"] = list(verdict.entry)
    if verdict.witness is not None:
        ops, tr = verdict.witness
        payload["ops"] = [op.label() for op in ops]
        payload["trace"] = format_rational(tr)
    _emit(args, verdict.describe(), payload)
    return 0


def cmd_classify(args) -> int:
    _no_cdd(args)
    if args.census:
        sc = _scenario(args)
        fns = polytope.enumerate_deterministic_vertices(
            sc, threads=args.threads, budget_seconds=args.budget)
        orbits, canonical = classify.orbit_decompose(fns)
        report = classify.taxonomy_census(canonical, len(orbits), len(fns))
        _emit(args, report.to_text(), report.as_dict())
        return 0
    if not args.file:
        raise InvalidInputError("classify needs a process file or --census")
    env = load_environment(args.file)
    g = process_to_det_function(env)
    if g is None:
        raise InvalidInputError("classification needs a deterministic (0-1) environment")
    if not consistency.is_consistent_deterministic(g):
        raise InvalidInputError("environment is not logically consistent")
    label = classify.classify_function(g)
    _emit(args, label, {"class": label})
    return 0


def _load_game(args) -> games.Game:
    if args.builtin:
        if args.file:
            raise InvalidInputError("give either a game file or --builtin, not both")
        return games.builtin_game(args.builtin)
    if not args.file:
        raise InvalidInputError("game needs a game file or --builtin")
    return games.load_game(args.file)


def _programs(game: games.Game, name: str):
    if name == "auto":
        name = "ex1" if game.name == "ex1" else "forward"
    if name == "ex1":
        if (game.n, game.d, game.m_size) != (3, 2, 3):
            raise InvalidInputError("ex1 programs need a three-party binary game with m in {0,1,2}")
        return games.ex1_programs()
    if name == "forward":
        return games.forward_programs(game)
    raise InvalidInputError(f"unknown strategy {name!r}")


def _describe_strategy(strategy: games.CausalStrategy) -> list[str]:
    if strategy.order_model == games.FIXED:
        return ["# order " + " ".join(map(str, strategy.schedule))]
    lines = []
    for (m, hist), nxt in sorted(strategy.schedule.items(), key=lambda kv: (kv[0][0], len(kv[0][1]), kv[0][1])):
        seen = " ".join(f"{p}={a}" for p, a in hist) or "-"
        lines.append(f"# m={m} after {seen}: party {nxt}")
    return lines


def cmd_game(args) -> int:
    _no_cdd(args)
    game = _load_game(args)
    if args.action == "eval":
        env = load_environment(args.env)
        value = games.eval_noncausal(game, env, _programs(game, args.strategy))
        _emit(args, format_rational(value), {"value": format_rational(value)})
    elif args.action == "causal-max":
        models = [games.FIXED, games.ADAPTIVE] if args.model == "both" else [args.model]
        results = {m: games.causal_max(game, m) for m in models}
        if len(models) == 1:
            value, strategy = results[models[0]]
            text = "\n".join([format_rational(value)] + _describe_strategy(strategy))
        else:
            text = "\n".join(f"{m} {format_rational(v)}" for m, (v, _) in results.items())
        _emit(args, text, {m: format_rational(v) for m, (v, _) in results.items()})
    else:
        sc = Scenario(game.n, game.d)
        p = polytope.build_hrep(sc)
        if args.objective:
            c = lp.parse_objective_text(Path(args.objective).read_text())
        else:
            c = lp.game_objective(game, _programs(game, args.strategy))
        value, vertex = lp.maximize(lp.LinearProgram(c, p))
        certified = polytope.is_vertex(p, vertex.point)
        text = "\n".join([format_rational(value), f"# is_vertex {str(certified).lower()}",
                          polytope.format_vertex_list(sc, [vertex]).rstrip("\n")])
        _emit(args, text, {"value": format_rational(value), "is_vertex": certified,
                           "vertex": [format_rational(x) for x in vertex.point]})
    return 0


def cmd_choi(args) -> int:
    _no_cdd(args)
    if args.from_triples:
        from .scenario import format_process_text
        w = choi.parse_triples(Path(args.file).read_text())
        env = choi.process_matrix_to_env(w)
        sys.stdout.write(format_process_text(env.scenario, env.matrix))
        return 0
    w = choi.env_to_process_matrix(load_environment(args.file))
    text = choi.format_triples(w)
    triples = [[k, m, format_rational(x)] for k, row in enumerate(w.diag)
               for m, x in enumerate(row) if x]
    _emit(args, text, {"n": w.scenario.n, "d": w.scenario.d, "triples": triples})
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker threads, 0 = one per CPU")
    common.add_argument("--budget", type=float, default=argparse.SUPPRESS,
                        help=f"wall-clock budget in seconds (also ${BUDGET_ENV})")
    common.add_argument("--format", choices=["native", "cdd", "json"], default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="acausal", parents=[common],
                                     description="Logically consistent classical processes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p, required=True):
        p.add_argument("-n", type=int, required=required, help="number of parties")
        p.add_argument("-d", type=int, required=required, help="alphabet size")

    p = sub.add_parser("dim", parents=[common], help="dimension and facet count")
    scenario_args(p)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("vertices", parents=[common], help="enumerate polytope vertices")
    scenario_args(p)
    p.add_argument("--deterministic-only", action="store_true")
    p.add_argument("--full-dd", action="store_true", help="allow hours-scale enumeration")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("check", parents=[common], help="logical consistency of a process file")
    p.add_argument("file")
    p.add_argument("--mode", choices=list(consistency.MODES), default=consistency.SUFFICIENT)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", parents=[common], help="signaling class or full census")
    p.add_argument("file", nargs="?")
    p.add_argument("--census", action="store_true")
    scenario_args(p, required=False)
    p.set_defaults(func=cmd_classify, n=3, d=2)

    p = sub.add_parser("game", parents=[common], help="game values")
    p.add_argument("file", nargs="?")
    p.add_argument("--builtin", choices=["ex1", "ex2"])
    actions = p.add_subparsers(dest="action", required=True)
    a = actions.add_parser("eval", parents=[common], help="success probability with an environment")
    a.add_argument("--env", required=True)
    a.add_argument("--strategy", choices=["auto", "forward", "ex1"], default="auto")
    a = actions.add_parser("causal-max", parents=[common], help="best causal strategy")
    a.add_argument("--model", choices=[games.FIXED, games.ADAPTIVE, "both"], default=games.ADAPTIVE)
    a = actions.add_parser("lp-max", parents=[common], help="best environment by linear programming")
    a.add_argument("--strategy", choices=["auto", "forward", "ex1"], default="auto")
    a.add_argument("--objective", help="file with one rational per coordinate")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("choi", parents=[common], help="diagonal process matrix triples")
    p.add_argument("file")
    p.add_argument("--from-triples", action="store_true", help="convert a triple list back")
    p.set_defaults(func=cmd_choi)
    return parser


def _resolve(args) -> None:
    args.format = getattr(args, "format", "native")
    threads = getattr(args, "threads", 1)
    if threads < 0:
        raise InvalidInputError("--threads must be >= 0")
    args.threads = threads or (os.cpu_count() or 1)
    budget = getattr(args, "budget", None)
    if budget is None and os.environ.get(BUDGET_ENV):
        try:
            budget = float(os.environ[BUDGET_ENV])
        except ValueError:
            raise InvalidInputError(f"${BUDGET_ENV} is not a number") from None
    if budget is not None and budget <= 0:
        raise InvalidInputError("budget must be positive")
    args.budget = budget


@contextmanager
def _alarm(seconds):
    """Backstop for commands without their own budget checks."""
    if not seconds or not hasattr(signal, "setitimer"):
        yield
        return

    def fire(signum, frame):
        raise BudgetExceededError(f"budget of {seconds}s exceeded")

    old = signal.signal(signal.SIGALRM, fire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _resolve(args)
        with _alarm(args.budget):
            return args.func(args)
    except AcausalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
