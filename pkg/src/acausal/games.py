"""Causal games and their values with and without a predefined causal order.

A game hands party ``j`` a setting ``a_j`` and everybody a common value
``m``; party ``j`` answers ``x_j``.  Programs for composition see the pair
``(a_j, m)`` encoded as ``a_j * m_size + m``.

Causal strategies assume full-information forwarding: a party's guess may
depend on its own setting, ``m`` and every setting of the parties before it.
For deterministic strategies that is without loss of generality, and it
turns the maximum into backward induction over the information tree:
a party moving after ``k`` others chooses its answer separately at every
node, and the final party best-responds to the full setting.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .classify import signaling_digraph
from .compose import PartyProgram, forward_program, joint_distribution, marginal
from .consistency import is_consistent_deterministic
from .errors import BudgetExceededError, InvalidInputError
from .ratmat import format_rational, parse_rational
from .scenario import DeterministicFunction, EnvironmentProcess, joint_decode, joint_encode

FIXED = "fixed"
ADAPTIVE = "adaptive"
# largest (setting, m) space causal_max will walk
MAX_SETTINGS = 1 << 12


@dataclass(frozen=True)
class Game:
    n: int
    d: int
    m_size: int
    # (a, m) -> frozenset of winning answer tuples
    winning: Mapping
    # (a, m) -> probability
    distribution: Mapping
    name: str = ""

    def __post_init__(self):
        total = sum(self.distribution.values(), Fraction(0))
        if total != 1:
            raise InvalidInputError(f"input distribution sums to {total}")
        if any(p < 0 for p in self.distribution.values()):
            raise InvalidInputError("negative input probability")

    def wins(self, a: Sequence[int], m: int, x: Sequence[int]) -> bool:
        return tuple(x) in self.winning.get((tuple(a), m), ())

    def settings(self):
        return [(a, m) for a in itertools.product(range(self.d), repeat=self.n)
                for m in range(self.m_size)]


def uniform_distribution(n: int, d: int, m_size: int) -> dict:
    p = Fraction(1, d ** n * m_size)
    return {(a, m): p for a in itertools.product(range(d), repeat=n) for m in range(m_size)}


def game_from_process(g: DeterministicFunction) -> Game:
    """Each party must output what ``g`` returns to it on input ``O = A``."""
    if not is_consistent_deterministic(g):
        raise InvalidInputError("game_from_process needs a consistent environment")
    dg = signaling_digraph(g)
    if not dg.is_complete():
        raise InvalidInputError(
            "every party's target must depend on every other party's setting; "
            f"signaling edges are {sorted(dg.edges)}")
    sc = g.scenario
    winning = {}
    for a in itertools.product(range(sc.d), repeat=sc.n):
        target = joint_decode(sc, g.table[joint_encode(sc, a)])
        winning[(a, 0)] = frozenset([target])
    return Game(sc.n, sc.d, 1, winning, uniform_distribution(sc.n, sc.d, 1), name="process")


def _ex1() -> Game:
    # m is zero-based: m = j asks party j for the parity of the other two
    winning = {}
    for a in itertools.product((0, 1), repeat=3):
        for m in range(3):
            others = [a[j] for j in range(3) if j != m]
            parity = others[0] ^ others[1]
            winning[(a, m)] = frozenset(x for x in itertools.product((0, 1), repeat=3)
                                        if x[m] == parity)
    return Game(3, 2, 3, winning, uniform_distribution(3, 2, 3), name="ex1")


def _ex2() -> Game:
    winning = {}
    for a in itertools.product((0, 1), repeat=3):
        A, B, C = a
        if A + B + C <= 1:
            target = (C, A, B)
        else:
            target = (1 - B, 1 - C, 1 - A)
        winning[(a, 0)] = frozenset([target])
    return Game(3, 2, 1, winning, uniform_distribution(3, 2, 1), name="ex2")


_BUILTIN = {"ex1": _ex1, "ex2": _ex2}


def builtin_game(name: str) -> Game:
    try:
        return _BUILTIN[name]()
    except KeyError:
        raise InvalidInputError(f"unknown builtin game {name!r}; choose from {sorted(_BUILTIN)}") from None


def builtin_games() -> list[Game]:
    return [f() for f in _BUILTIN.values()]


# ---------------------------------------------------------------------------
# strategies without predefined order

def game_program_input(game: Game, a_j: int, m: int) -> int:
    return a_j * game.m_size + m


def forward_programs(game: Game) -> list[PartyProgram]:
    if game.m_size != 1:
        raise InvalidInputError("forwarding strategy is defined for games without m")
    return [forward_program(game.d) for _ in range(game.n)]


def ex1_programs() -> list[PartyProgram]:
    """Winning programs for ex1 on the mixed circular channel.

    With ``g = m`` the guessing party, party ``g+1`` (cyclically) sends its
    setting, party ``g+2`` sends its setting XOR what it receives, and the
    guesser reports what it receives.
    """
    progs = []
    for j in range(3):
        def fn(a_in, i, j=j):
            a, m = divmod(a_in, 3)
            role = (j - m) % 3
            o = a ^ i if role == 2 else a
            return (i, o)
        progs.append(PartyProgram.deterministic(2, 6, 2, fn))
    return progs


def eval_noncausal(game: Game, env: EnvironmentProcess, programs: Sequence[PartyProgram]) -> Fraction:
    if env.scenario.n != game.n or env.scenario.d != game.d:
        raise InvalidInputError("environment and game scenarios differ")
    value = Fraction(0)
    for (a, m), w in game.distribution.items():
        if not w:
            continue
        inputs = [game_program_input(game, a[j], m) for j in range(game.n)]
        dist = joint_distribution(env, programs, inputs)
        for x, p in marginal(dist, ["x"]).items():
            if game.wins(a, m, x):
                value += w * p
    return value


# ---------------------------------------------------------------------------
# strategies with predefined order

@dataclass
class CausalStrategy:
    """A deterministic full-information causal strategy.

    ``schedule`` is the party order for the fixed model.  For the adaptive
    model it is a dict from the revealed history ``(m, ((party, a), ...))``
    to the party moving next.  ``guess_tables[j]`` maps the view of party
    ``j``, ``(m, ((party, a), ...))`` ending with its own setting, to its
    answer.
    """

    order_model: str
    schedule: object
    guess_tables: dict = field(default_factory=dict)

    def order_for(self, a: Sequence[int], m: int) -> list[int]:
        if self.order_model == FIXED:
            return list(self.schedule)
        hist = ()
        order = []
        n = len(a)
        while len(order) < n:
            nxt = self.schedule[(m, hist)]
            order.append(nxt)
            hist = hist + ((nxt, a[nxt]),)
        return order

    def answers(self, a: Sequence[int], m: int) -> tuple:
        x = [0] * len(a)
        hist = ()
        for j in self.order_for(a, m):
            hist = hist + ((j, a[j]),)
            x[j] = self.guess_tables[j][(m, hist)]
        return tuple(x)


def eval_causal_strategy(game: Game, strategy: CausalStrategy) -> Fraction:
    value = Fraction(0)
    for (a, m), w in game.distribution.items():
        if w and game.wins(a, m, strategy.answers(a, m)):
            value += w
    return value


class _Search:
    def __init__(self, game: Game):
        self.game = game
        self.choices = {}
        self.tables = {j: {} for j in range(game.n)}

    def leaf(self, m, hist, xs):
        a = [0] * self.game.n
        for j, aj in hist:
            a[j] = aj
        a = tuple(a)
        w = self.game.distribution.get((a, m), Fraction(0))
        return w if w and self.game.wins(a, m, xs) else Fraction(0)

    def step(self, m, hist, xs, party, rest, adaptive, record):
        """Value when ``party`` moves next at ``hist``; ``rest`` follow."""
        g = self.game
        total = Fraction(0)
        for aj in range(g.d):
            h = hist + ((party, aj),)
            best, best_x = None, None
            for xj in range(g.d):
                nxs = list(xs)
                nxs[party] = xj
                v = self.node(m, h, nxs, rest, adaptive, False)
                if best is None or v > best:
                    best, best_x = v, xj
            total += best
            if record:
                self.tables[party][(m, h)] = best_x
                nxs = list(xs)
                nxs[party] = best_x
                self.node(m, h, nxs, rest, adaptive, True)
        return total

    def node(self, m, hist, xs, rest, adaptive, record):
        if not rest:
            return self.leaf(m, hist, tuple(xs))
        if not adaptive:
            return self.step(m, hist, xs, rest[0], rest[1:], adaptive, record)
        best, best_q = None, None
        for q in rest:
            others = tuple(r for r in rest if r != q)
            v = self.step(m, hist, xs, q, others, adaptive, False)
            if best is None or v > best:
                best, best_q = v, q
        if record:
            self.choices[(m, hist)] = best_q
            self.step(m, hist, xs, best_q, tuple(r for r in rest if r != best_q), adaptive, True)
        return best


def causal_max(game: Game, model: str = ADAPTIVE) -> tuple[Fraction, CausalStrategy]:
    """Best success probability over deterministic causal strategies.

    ``fixed``: one party order for all settings.  ``adaptive``: the first
    party is fixed, and each later position is filled by a party chosen from
    the settings revealed so far and ``m``.  Ties resolve to the smallest
    party index and answer.
    """
    if model not in (FIXED, ADAPTIVE):
        raise InvalidInputError(f"unknown order model {model!r}")
    if game.d ** game.n * game.m_size > MAX_SETTINGS or game.n > 5:
        raise BudgetExceededError(f"game with n={game.n}, d={game.d}, m={game.m_size} is too large")
    parties = tuple(range(game.n))
    best_val, best_strategy = None, None
    if model == FIXED:
        candidates = [tuple(p) for p in itertools.permutations(parties)]
    else:
        candidates = [(p,) for p in parties]
    adaptive = model == ADAPTIVE
    for cand in candidates:
        first = cand[0]
        rest = tuple(q for q in parties if q != first) if adaptive else cand[1:]
        search = _Search(game)
        total = sum((search.step(m, (), [0] * game.n, first, rest, adaptive, False)
                     for m in range(game.m_size)), Fraction(0))
        if best_val is not None and total <= best_val:
            continue
        for m in range(game.m_size):
            search.step(m, (), [0] * game.n, first, rest, adaptive, True)
            if adaptive:
                search.choices[(m, ())] = first
        best_val = total
        best_strategy = CausalStrategy(model, dict(search.choices) if adaptive else cand,
                                       search.tables)
    return best_val, best_strategy


def generic_causal_bound(game: Game) -> Fraction:
    return 1 - Fraction(1, game.d ** game.n)


# ---------------------------------------------------------------------------
# game files

def format_game_text(game: Game, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{game.n} {game.d} {game.m_size}")
    for a, m in game.settings():
        for x in sorted(game.winning.get((a, m), ())):
            lines.append(" ".join(map(str, a)) + f" {m} : " + " ".join(map(str, x)))
    uniform = uniform_distribution(game.n, game.d, game.m_size)
    if dict(game.distribution) != uniform:
        for a, m in game.settings():
            p = game.distribution.get((a, m), Fraction(0))
            lines.append("prob " + " ".join(map(str, a)) + f" {m} : {format_rational(p)}")
    return "\n".join(lines) + "\n"


def parse_game_text(text: str, name: str = "") -> Game:
    lines = [raw.split("#", 1)[0].strip() for raw in text.splitlines()]
    lines = [l for l in lines if l]
    if not lines:
        raise InvalidInputError("empty game file")
    try:
        n, d, m_size = (int(x) for x in lines[0].split())
    except ValueError:
        raise InvalidInputError(f"header must be 'n d m_size', got {lines[0]!r}") from None
    winning: dict = {}
    dist = {}

    def parse_setting(lhs):
        vals = [int(v) for v in lhs.split()]
        if len(vals) != n + 1 or any(not 0 <= v < d for v in vals[:n]) or not 0 <= vals[n] < m_size:
            raise InvalidInputError(f"bad setting {lhs!r}")
        return tuple(vals[:n]), vals[n]

    for line in lines[1:]:
        lhs, sep, rhs = line.partition(":")
        if not sep:
            raise InvalidInputError(f"missing ':' in {line!r}")
        if lhs.startswith("prob"):
            dist[parse_setting(lhs[4:])] = parse_rational(rhs)
            continue
        key = parse_setting(lhs)
        x = tuple(int(v) for v in rhs.split())
        if len(x) != n or any(not 0 <= v < d for v in x):
            raise InvalidInputError(f"bad answer tuple in {line!r}")
        winning.setdefault(key, set()).add(x)
    winning = {k: frozenset(v) for k, v in winning.items()}
    if not dist:
        dist = uniform_distribution(n, d, m_size)
    return Game(n, d, m_size, winning, dist, name=name)


def load_game(path) -> Game:
    path = Path(path)
    return parse_game_text(path.read_text(), name=path.stem)
