"""Command-line entry point: ``ordgame <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 internal invariant violation
(including any failed check).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import epistemic, knowledge, risk, solvers, suite
from .game import GameError, InvariantViolation, OrdinalGame, dumps_game, fraction_literal, load_game
from .generate import GeneratorConfig, random_game

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 2, 3


class RunReport:
    """What a command did: echo, input digests, checks, payload."""

    def __init__(self, argv):
        self.command = list(argv)
        self.inputs = {}
        self.checks = []
        self.payload = None
        self.lines = []
        self.started = time.perf_counter()
        self.seconds = None

    def digest(self, path):
        with open(path, "rb") as fh:
            self.inputs[path] = hashlib.sha256(fh.read()).hexdigest()

    def check(self, name, ok, detail=None):
        self.checks.append({"name": name, "ok": bool(ok), "detail": detail})

    @property
    def ok(self):
        return all(c["ok"] for c in self.checks)

    def to_json(self, timing=False):
        out = {"command": self.command, "inputs": self.inputs, "checks": self.checks,
               "payload": self.payload}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out

    def render_table(self):
        lines = list(self.lines)
        for c in self.checks:
            mark = "PASS" if c["ok"] else "FAIL"
            detail = f"  {c['detail']}" if c["detail"] not in (None, "", []) else ""
            lines.append(f"[{mark}] {c['name']}{detail}")
        return "\n".join(lines)


def _fmt_set(items):
    return "{" + ",".join(items) + "}"


def _fmt_family(game, fam):
    return "  ".join(f"{game.players[i]}={_fmt_set([a for a in game.actions[i] if a in fam[i]])}"
                     for i in range(game.n_players))


def _fmt_profiles(game, profs):
    order = {p: k for k, p in enumerate(game.profiles())}
    return _fmt_set(["(" + ",".join(p) + ")" for p in sorted(profs, key=order.__getitem__)])


def _matrix(game: OrdinalGame, alive) -> list[str]:
    """Row player down, column player across; surviving cells starred."""
    if game.n_players != 2:
        return []
    rows, cols = game.actions
    cells = [[f"{fraction_literal(game.payoff(0, (r, c)))},{fraction_literal(game.payoff(1, (r, c)))}"
              + ("*" if (r, c) in alive else " ") for c in cols] for r in rows]
    w = max([len(x) for row in cells for x in row] + [len(c) for c in cols])
    rw = max(len(r) for r in rows)
    out = [" " * rw + " | " + " ".join(c.rjust(w) for c in cols)]
    for r, row in zip(rows, cells):
        out.append(r.rjust(rw) + " | " + " ".join(x.rjust(w) for x in row))
    return out


def _load_game(rep, path):
    rep.digest(path)
    return load_game(path)


def cmd_solve(args, rep):
    game = _load_game(rep, args.game)
    tr = solvers.solve(game, args.concept)
    problems = solvers.verify_trace(game, tr)
    rep.check("certificates re-verify", not problems, problems)
    data = solvers.trace_to_json(game, tr)
    if not args.trace:
        data = {k: v for k, v in data.items() if k != "justifications"}
    rep.payload = data
    alive = tr.profiles_at(game, len(tr.rounds))
    rep.lines.append(f"{tr.concept}: fixed point reached at round {tr.fixed_point_round}")
    for m, r in enumerate(tr.rounds if args.trace else [tr.fixed_point]):
        label = f"round {m}" if args.trace else "fixed point"
        body = _fmt_profiles(game, r) if tr.profile_level else _fmt_family(game, r)
        rep.lines.append(f"  {label}: {body}")
    if args.trace:
        for j in tr.justifications:
            if not j.kept:
                who = f"{game.players[j.player]}:" if j.player is not None else ""
                item = "(" + ",".join(j.item) + ")" if isinstance(j.item, tuple) else j.item
                rep.lines.append(f"  round {j.round} removes {who}{item}")
    rep.lines.extend(_matrix(game, alive))


def cmd_relations(args, rep):
    game = _load_game(rep, args.game)
    rr = solvers.relations(game)
    rep.payload = solvers.relations_to_json(game, rr)
    rep.check("claimed inclusions hold at every round", rr.ok, rr.violations)
    rep.lines.append(f"generic: {rr.generic}")
    for c in ("PR", "WR", "BR", "TR", "IESD"):
        rep.lines.append(f"  {c}^inf: {_fmt_family(game, rr.traces[c].fixed_point)}")
    rep.lines.append(f"  YR^inf: {_fmt_profiles(game, rr.traces['YR'].fixed_point)}")
    seen = set()
    for w in rr.non_inclusions:
        key = (w["sub"], w["sup"])
        if key not in seen:
            seen.add(key)
            rep.lines.append(f"  {w['sub']} not inside {w['sup']}: {w['player']}:{w['action']} at round {w['round']}")


def _structure_path(args):
    path = args.structure or args.path
    if not path:
        raise GameError(["a structure file is required"])
    return path


def cmd_epistemic(args, rep):
    sub = args.epistemic_command
    if sub == "witness":
        game = _load_game(rep, args.game)
        s = epistemic.build_witness_structure(game, args.attitude)
        ir = epistemic.check_inclusion_theorem(s, args.attitude)
        rep.check("per-level equality", ir.all_equal, ir.violations)
        data = epistemic.structure_to_json(s)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(data, fh, indent=2)
                fh.write("\n")
            again = epistemic.load_structure(args.out)
            rep.check("written structure re-validates and re-checks",
                      epistemic.check_inclusion_theorem(again, args.attitude).all_equal)
        rep.payload = data
        rep.lines.append(f"witness structure: types per player {[len(t) for t in s.types]}")
        return
    path = _structure_path(args)
    rep.digest(path)
    st = epistemic.load_structure(path)
    if sub == "check":
        if isinstance(st, knowledge.KnowledgeStructure):
            st = knowledge.possibility_from_knowledge(st)
        atts = [args.attitude] if args.attitude else [epistemic.OPT, epistemic.PES, epistemic.ADM,
                                                       epistemic.OPT_DEG]
        out = []
        for att in atts:
            ir = epistemic.check_inclusion_theorem(st, att)
            rels = [lv[3] for lv in ir.levels]
            if args.depth is not None:
                rels = rels[:args.depth + 1]
            rep.check(f"{att}: proj CB^n inside {ir.procedure}^(n+1)", ir.ok, ir.violations)
            rep.lines.append(f"  {att}: levels {rels}, infinity {ir.at_infinity}")
            out.append({"attitude": att, "procedure": ir.procedure, "levels": [
                {"n": n, "projection": sorted(map(list, proj)), "procedure_round": sorted(map(list, ar)),
                 "relation": rel} for n, proj, ar, rel in ir.levels], "infinity": ir.at_infinity,
                "violations": ir.violations})
        rep.payload = out
    elif sub == "wt-check":
        if not isinstance(st, knowledge.KnowledgeStructure):
            raise GameError(["wt-check needs a knowledge structure (with 'states')"])
        wr = knowledge.check_wt_theorem(st)
        rep.check("proj K^n(Opt) inside YR^(n+1)", wr.ok, wr.violations)
        rep.lines.append(f"  levels {[lv[3] for lv in wr.levels]}, infinity {wr.at_infinity}")
        rep.payload = {"levels": [{"n": n, "projection": sorted(map(list, p)), "yr": sorted(map(list, y)),
                                   "relation": r} for n, p, y, r in wr.levels],
                       "infinity": wr.at_infinity, "violations": wr.violations}
    elif sub == "product-check":
        if not isinstance(st, knowledge.KnowledgeStructure):
            raise GameError(["product-check needs a knowledge structure (with 'states')"])
        try:
            pr = knowledge.product_triviality_check(st)
        except ValueError as exc:
            raise GameError([str(exc)]) from exc
        rep.check("only the full interactive event is known", pr.ok, pr.violations)
        rep.lines.append(f"  events checked: {pr.events_checked}{' (sampled)' if pr.sampled else ''}")
        rep.payload = {"events_checked": pr.events_checked, "sampled": pr.sampled,
                       "violations": pr.violations}


def _parse_rs(text):
    try:
        rs = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise GameError([f"--r must be a comma-separated list of integers, got {text!r}"]) from None
    if not rs or any(r < 1 for r in rs) or any(b <= a for a, b in zip(rs, rs[1:])):
        raise GameError(["--r must be strictly increasing positive integers"])
    return rs


def cmd_limit(args, rep):
    game = _load_game(rep, args.game)
    rs = _parse_rs(args.r)
    cr = risk.convergence_experiment(game, rs)
    rep.payload = risk.convergence_to_json(game, cr)
    rep.check("TR^inf nondecreasing in r", cr.monotone)
    rep.check("TR^inf inside BR^inf", cr.inside_br)
    for r, t in zip(cr.rs, cr.tr):
        rep.lines.append(f"  r={r}: TR^inf {_fmt_family(game, t)}")
    rep.lines.append(f"  BR^inf: {_fmt_family(game, cr.br)}")
    rep.lines.append(f"  WR^inf of limiting game: {_fmt_family(game, cr.wr_limit)}")
    rep.lines.append(f"  WR^inf: {_fmt_family(game, cr.wr_base)}")
    rep.lines.append(f"  stable from r={cr.stabilizes_at}")


def cmd_random(args, rep):
    try:
        acts = tuple(int(x) for x in args.actions.split(","))
        lo, hi = (int(x) for x in args.range.split(","))
    except ValueError:
        raise GameError(["--actions and --range take comma-separated integers"]) from None
    players = args.players if args.players is not None else len(acts)
    if len(acts) == 1:
        acts = acts * players
    try:
        cfg = GeneratorConfig(args.seed, players, acts, args.generic, (lo, hi))
    except ValueError as exc:
        raise GameError([str(exc)]) from exc
    game = random_game(cfg)
    text = dumps_game(game)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    rep.payload = json.loads(text)
    rep.lines.append(text)


def cmd_suite(args, rep):
    sr = suite.property_suite(args.count, args.players, args.max_actions, args.seed, args.out_dir,
                              n_structures=args.structures)
    rep.payload = suite.suite_to_json(sr)
    rep.check(f"{sr.checks_run} games pass every property", sr.ok,
              [f"{f['check']} (game {f['index']}): {f['messages'][0]}" for f in sr.failures])
    for f in sr.failures:
        if f["reproducer"]:
            rep.lines.append(f"  reproducer: {f['reproducer']}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--seed", type=int, default=0, help="unsigned 64-bit seed")
    common.add_argument("--timing", action="store_true", help="include wall time in the report")

    p = argparse.ArgumentParser(prog="ordgame", description="Ordinal game solver and epistemic lab.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="run one iterated procedure")
    s.add_argument("--game", required=True)
    s.add_argument("--concept", required=True, type=str.upper, choices=sorted(solvers.SOLVERS))
    s.add_argument("--trace", action="store_true", help="show every round and elimination")
    s.set_defaults(fn=cmd_solve)

    s = sub.add_parser("relations", parents=[common], help="compare all procedures round by round")
    s.add_argument("--game", required=True)
    s.set_defaults(fn=cmd_relations)

    s = sub.add_parser("epistemic", help="model-check structures")
    esub = s.add_subparsers(dest="epistemic_command", required=True)
    atts = (epistemic.OPT, epistemic.PES, epistemic.ADM, epistemic.OPT_DEG)
    e = esub.add_parser("check", parents=[common])
    e.add_argument("path", nargs="?")
    e.add_argument("--structure")
    e.add_argument("--attitude", choices=atts)
    e.add_argument("--depth", type=int)
    e = esub.add_parser("witness", parents=[common])
    e.add_argument("--game", required=True)
    e.add_argument("--attitude", required=True, choices=atts[:3])
    e.add_argument("--out")
    for name in ("wt-check", "product-check"):
        e = esub.add_parser(name, parents=[common])
        e.add_argument("path", nargs="?")
        e.add_argument("--structure")
    s.set_defaults(fn=cmd_epistemic)

    s = sub.add_parser("limit", parents=[common], help="risk-aversion convergence experiment")
    s.add_argument("--game", required=True)
    s.add_argument("--r", default="1,2,4,8")
    s.set_defaults(fn=cmd_limit)

    s = sub.add_parser("random", parents=[common], help="generate a random game")
    s.add_argument("--players", type=int)
    s.add_argument("--actions", default="3,3", help="per-player counts, or one count for all")
    s.add_argument("--generic", action="store_true")
    s.add_argument("--range", default="0,9", help="lo,hi integer payoff range")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_random)

    s = sub.add_parser("suite", parents=[common], help="randomized property battery")
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--players", type=int, default=2)
    s.add_argument("--max-actions", type=int, default=4)
    s.add_argument("--structures", type=int, default=1, help="random structures per game")
    s.add_argument("--out-dir")
    s.set_defaults(fn=cmd_suite)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = RunReport(["ordgame"] + argv)
    try:
        args.fn(args, rep)
        code = EXIT_OK if rep.ok else EXIT_INVARIANT
    except (GameError, ValueError, OSError, json.JSONDecodeError) as exc:
        msgs = getattr(exc, "violations", None) or [str(exc)]
        for m in msgs:
            print(f"error: {m}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    rep.seconds = time.perf_counter() - rep.started
    if args.format == "json":
        print(json.dumps(rep.to_json(args.timing), indent=2))
    else:
        print(rep.render_table())
        if args.timing:
            print(f"({rep.seconds:.3f} s)")
    return code


if __name__ == "__main__":
    sys.exit(main())
