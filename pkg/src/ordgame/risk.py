"""Increasingly risk-averse payoff transforms and their extreme limit.

Member r replaces each payoff u by -(c - u)**r, with c one above the
player's largest payoff, then rescales each player to [0, 1]. Everything
stays rational, and for r > s member r is an increasing concave function of
member s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .game import InvariantViolation, OrdinalGame, ordinal_equivalent
from .solvers import BR, TR, WR, borgers_rationalizability, rationalizability, wald_rationalizability


@dataclass(frozen=True)
class ConcaveFamilyMember:
    base: OrdinalGame
    r: int
    game: OrdinalGame
    # players whose payoffs are constant (normalization impossible, mapped to 0)
    degenerate: tuple


def _rescale(values: dict) -> tuple[dict, bool]:
    lo, hi = min(values.values()), max(values.values())
    if lo == hi:
        return {p: Fraction(0) for p in values}, True
    return {p: (v - lo) / (hi - lo) for p, v in values.items()}, False


def concave_transform(game: OrdinalGame, r: int) -> ConcaveFamilyMember:
    if isinstance(r, bool) or not isinstance(r, int) or r < 1:
        raise ValueError(f"r must be a positive integer, got {r!r}")
    tables, flags = [], []
    for i in range(game.n_players):
        c = max(game.payoffs[i].values()) + 1
        raw = {p: -((c - u) ** r) for p, u in game.payoffs[i].items()}
        scaled, flat = _rescale(raw)
        tables.append(scaled)
        flags.append(flat)
    return ConcaveFamilyMember(game, r, game.with_payoffs(tables), tuple(flags))


def limiting_game(game: OrdinalGame) -> ConcaveFamilyMember:
    """0 where a player gets its global minimum, 1 elsewhere (all 0 for a constant player)."""
    tables, flags = [], []
    for i in range(game.n_players):
        lo = min(game.payoffs[i].values())
        table = {p: Fraction(0 if u == lo else 1) for p, u in game.payoffs[i].items()}
        tables.append(table)
        flags.append(len(set(game.payoffs[i].values())) == 1)
    return ConcaveFamilyMember(game, 0, game.with_payoffs(tables), tuple(flags))


def link_is_concave(lower: OrdinalGame, upper: OrdinalGame) -> bool:
    """Is ``upper`` an increasing concave function of ``lower``, player by player?

    Checked on the attained values through slopes of consecutive points.
    """
    for i in range(lower.n_players):
        pairs = {}
        for p, x in lower.payoffs[i].items():
            y = upper.payoffs[i][p]
            if pairs.setdefault(x, y) != y:
                return False  # not a function of the lower payoff
        xs = sorted(pairs)
        slopes = []
        for x0, x1 in zip(xs, xs[1:]):
            dy = pairs[x1] - pairs[x0]
            if dy <= 0:
                return False
            slopes.append(dy / (x1 - x0))
        if any(b > a for a, b in zip(slopes, slopes[1:])):
            return False
    return True


def check_member(member: ConcaveFamilyMember) -> list[str]:
    """Invariant failures of a family member (empty when sound)."""
    out = []
    g = member.game
    for i in range(g.n_players):
        vals = set(g.payoffs[i].values())
        if member.degenerate[i]:
            if vals != {0}:
                out.append(f"degenerate player {g.players[i]!r} not mapped to 0")
            continue
        if min(vals) != 0 or max(vals) != 1:
            out.append(f"player {g.players[i]!r} not normalized to [0, 1]")
    if not ordinal_equivalent(member.base, g):
        out.append("member is not ordinally equivalent to the base game")
    return out


def _family_le(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass
class ConvergenceReport:
    rs: list
    tr: list                 # TR^inf(Λ^{-r}) per r
    monotone: bool
    inside_br: bool
    stabilizes_at: int       # first r from which TR^inf stays constant along the list
    br: tuple                # BR^inf(Γ)
    wr_limit: tuple          # WR^inf(Λ^{-inf})
    wr_base: tuple           # WR^inf(Γ)
    # (X, Y) -> (X ⊆ Y, X ⊊ Y) among the four named sets
    matrix: dict
    violations: list = field(default_factory=list)


def convergence_experiment(game: OrdinalGame, rs: Sequence[int]) -> ConvergenceReport:
    rs = list(rs)
    if not rs or any(b <= a for a, b in zip(rs, rs[1:])):
        raise ValueError("r values must be a nonempty strictly increasing list")
    prev, trs = None, []
    for r in rs:
        member = concave_transform(game, r)
        bad = check_member(member)
        if bad:
            raise InvariantViolation(f"family member r={r}: {bad}")
        if prev is not None and not link_is_concave(prev.game, member.game):
            raise InvariantViolation(f"link between r={prev.r} and r={r} is not increasing and concave")
        trs.append(rationalizability(member.game).fixed_point)
        prev = member
    br = borgers_rationalizability(game).fixed_point
    wr_limit = wald_rationalizability(limiting_game(game).game).fixed_point
    wr_base = wald_rationalizability(game).fixed_point
    violations = []
    monotone = all(_family_le(a, b) for a, b in zip(trs, trs[1:]))
    if not monotone:
        violations.append("TR^inf is not nondecreasing in r")
    inside = all(_family_le(t, br) for t in trs)
    if not inside:
        violations.append("some TR^inf(Λ^{-r}) is not contained in BR^inf")
    stab = len(trs) - 1
    while stab > 0 and trs[stab - 1] == trs[-1]:
        stab -= 1
    named = {f"{TR}(r={rs[-1]})": trs[-1], BR: br, f"{WR}(limit)": wr_limit, WR: wr_base}
    matrix = {}
    for x, fx in named.items():
        for y, fy in named.items():
            if x != y:
                le = _family_le(fx, fy)
                matrix[(x, y)] = (le, le and fx != fy)
    return ConvergenceReport(rs, trs, monotone, inside, rs[stab], br, wr_limit, wr_base, matrix,
                             violations)


def convergence_to_json(game: OrdinalGame, rep: ConvergenceReport) -> dict:
    def fam(f):
        return {game.players[i]: [a for a in game.actions[i] if a in f[i]] for i in range(game.n_players)}

    return {
        "r": rep.rs,
        "tr_fixed_points": [{"r": r, "sets": fam(t)} for r, t in zip(rep.rs, rep.tr)],
        "monotone": rep.monotone,
        "inside_br": rep.inside_br,
        "stabilizes_at": rep.stabilizes_at,
        "br": fam(rep.br),
        "wr_limit": fam(rep.wr_limit),
        "wr": fam(rep.wr_base),
        "inclusions": [{"sub": x, "sup": y, "included": le, "strict": st}
                       for (x, y), (le, st) in rep.matrix.items()],
        "violations": rep.violations,
    }
