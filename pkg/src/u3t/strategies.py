"""Deterministic move choosers behind one strategy interface.

Six strategies are exposed by id:

* ``xavier-winning`` -- the first player's forced-win strategy: open on the
  board centre, answer every reply with the centre of the field it points to,
  then claim the one untouched field ``f`` and its central reflection
  ``g = 8 - f``, finishing by playing spot ``f`` (else spot ``g``) of whatever
  field the opponent's move points at.
* ``lbs`` -- the second player's delaying strategy: first into a field means
  the field's own index; otherwise steer the opponent toward X-free fields.
* ``blocker-avoid`` -- punishes a non-double first move ``(i, j)`` by pinning
  the first player inside fields ``i`` and ``j`` (prefer spot ``j``, else
  spot ``i``) until both are full, then switches to ``lbs``.
* ``blocker-avoid2`` -- punishes a wrong second move after a double opening;
  same pinning scheme over spots ``{k, i}`` (or ``{j, i}`` when ``k = j``).
* ``random`` / ``greedy`` -- seeded sampling adversaries.

The named strategies are pure functions of the move history; random and
greedy are pure functions of (history, seed). Where the underlying rules
leave a free pick, the lowest index wins, so every chooser is deterministic
and exhaustive search over opponents is meaningful.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .engine import (
    BoardState,
    CellAddr,
    EMPTY_SPOTS,
    FULL9,
    HAS_LINE,
    IN_PROGRESS,
    IllegalMoveError,
    O,
    OPEN,
    WON_O,
    WON_X,
    X,
    apply_move,
    field_bits,
    is_field_full,
    legal_moves,
    new_game,
)
from .records import GameRecord

STRATEGY_IDS = ("xavier-winning", "lbs", "blocker-avoid", "blocker-avoid2", "random", "greedy")

# Seats each strategy can play. The named strategies are defined for one
# side only; the sampling adversaries play either.
STRATEGY_SEATS = {
    "xavier-winning": "X",
    "lbs": "O",
    "blocker-avoid": "O",
    "blocker-avoid2": "O",
    "random": "XO",
    "greedy": "XO",
}

_M64 = (1 << 64) - 1


class StrategyError(ValueError):
    """The history violates a strategy's precondition, or no move exists."""


@dataclass
class StrategyContext:
    """Input to ``choose``: full move history, plus a seed for random/greedy."""

    history: Sequence[CellAddr]
    seed: Optional[int] = None


@dataclass(frozen=True)
class AnchorPair:
    """The untouched field ``f`` at middlegame start and ``g = 8 - f``.

    ``{f, 4, g}`` is a line both as spots within any field and as fields on
    the board, which is exactly what the winning strategy exploits.
    """

    f: int
    g: int

    def __post_init__(self):
        if self.f == 4 or not 0 <= self.f <= 8:
            raise ValueError(f"invalid anchor field {self.f}")
        if self.g != 8 - self.f:
            raise ValueError(f"anchor partner must be {8 - self.f}, got {self.g}")

    @property
    def others(self) -> tuple[int, ...]:
        """The six fields outside {f, 4, g}."""
        return tuple(i for i in range(9) if i not in (self.f, 4, self.g))


def _occ(state: BoardState) -> int:
    return state.x_bits | state.o_bits

def _is_empty(state: BoardState, f: int, s: int) -> bool:
    return not (_occ(state) >> (f * 9 + s)) & 1


def _lowest_open_field(state: BoardState) -> int:
    occ = _occ(state)
    for f in range(9):
        if (occ >> (f * 9)) & FULL9 != FULL9:
            return f
    raise StrategyError("no open field: board is full")


# --- xavier-winning ---------------------------------------------------------

def xavier_anchor(state: BoardState) -> AnchorPair:
    """Recover the anchor from a position: the one field whose centre X
    never claimed. Only defined once the opening is complete (ply >= 16)."""
    missing = [i for i in range(9) if not (state.x_bits >> (i * 9 + 4)) & 1]
    if len(missing) != 1:
        raise StrategyError(
            f"anchor undefined: {len(missing)} fields lack an X centre (ply {state.ply})"
        )
    f = missing[0]
    return AnchorPair(f, 8 - f)


def xavier_move(state: BoardState) -> CellAddr:
    """The winning strategy's move for the current position.

    Assumes every earlier X move followed the strategy (use
    ``xavier_choose`` to validate a raw history). Opening: (4,4), then the
    centre of whatever field the opponent's spot points at. From ply 17 on,
    one rule covers both remaining phases: let k be the forced field (on a
    free choice: the anchor partner g while (g,g) is still unplayed,
    afterwards the lowest non-full field); play (k, f) if that cell is
    empty, else (k, g).
    """
    if state.to_move != X:
        raise StrategyError("xavier-winning plays X; it is O's turn")
    ply = state.ply
    if ply == 0:
        return (4, 4)
    if ply <= 14:
        j = state.forced_field
        if j is None:
            raise StrategyError("inconsistent opening: free choice before ply 16")
        return (j, 4)
    anchor = xavier_anchor(state)
    f, g = anchor.f, anchor.g
    k = state.forced_field
    if k is None:
        gg_played = (state.x_bits >> (g * 9 + g)) & 1
        k = _lowest_open_field(state) if gg_played else g
    if _is_empty(state, k, f):
        return (k, f)
    if _is_empty(state, k, g):
        return (k, g)
    raise StrategyError(
        f"inconsistent history: spots {f} and {g} of field {k} both taken"
    )


def xavier_phase(state: BoardState) -> str:
    """Phase of the move X is about to play from this position."""
    if state.ply <= 14:
        return "opening"
    anchor = xavier_anchor(state)
    gg_played = (state.x_bits >> (anchor.g * 9 + anchor.g)) & 1
    return "endgame" if gg_played else "middlegame"


# --- lbs --------------------------------------------------------------------

def _lbs_spot(state: BoardState, j: int) -> int:
    """The lbs spot choice within field j.

    Virgin field: its own index. Otherwise the lowest spot i such that field
    i holds no X and (j, i) is empty; if no such spot exists, the lowest
    empty spot of field j.
    """
    occ = _occ(state)
    fj = (occ >> (j * 9)) & FULL9
    if fj == 0:
        return j
    x_bits = state.x_bits
    for i in range(9):
        if (x_bits >> (i * 9)) & FULL9 == 0 and not (fj >> i) & 1:
            return i
    return EMPTY_SPOTS[fj][0]


def lbs_move(state: BoardState) -> CellAddr:
    if state.to_move != O:
        raise StrategyError("lbs plays O; it is X's turn")
    j = state.forced_field
    if j is None:
        j = _lowest_open_field(state)
    return (j, _lbs_spot(state, j))


# --- blockers ---------------------------------------------------------------

def blocker_move(
    state: BoardState,
    prefer: int,
    other: int,
    targets: tuple[int, int],
) -> CellAddr:
    """Pinning move: spot ``prefer`` of the active field if empty, else spot
    ``other``; once both target fields are full the blocker retires and
    plays lbs. If neither pin spot is available mid-phase, the move falls
    through to the lbs spot rule for that single turn.
    """
    if state.to_move != O:
        raise StrategyError("blockers play O; it is X's turn")
    if is_field_full(state, targets[0]) and is_field_full(state, targets[1]):
        return lbs_move(state)
    k = state.forced_field
    if k is None:
        k = _lowest_open_field(state)
    if _is_empty(state, k, prefer):
        return (k, prefer)
    if _is_empty(state, k, other):
        return (k, other)
    return (k, _lbs_spot(state, k))


def blocker_phase_over(state: BoardState, targets: tuple[int, int]) -> bool:
    return is_field_full(state, targets[0]) and is_field_full(state, targets[1])


def blocker_avoid_move(state: BoardState, history: Sequence[CellAddr]) -> CellAddr:
    if not history:
        raise StrategyError("blocker-avoid is defined after X's first move")
    i, j = history[0]
    if i == j:
        raise StrategyError("blocker-avoid requires a non-double first move")
    return blocker_move(state, j, i, (i, j))


def _avoid2_prefix(history: Sequence[CellAddr]) -> tuple[int, int, int]:
    """Validate and destructure the (i,i), (i,j), (j,k) prefix."""
    if len(history) < 3:
        raise StrategyError("blocker-avoid2 needs the three-move prefix")
    (f0, s0), (f1, s1), (f2, s2) = history[0], history[1], history[2]
    if f0 != s0:
        raise StrategyError("blocker-avoid2 requires a double first move")
    i = f0
    if f1 != i:
        raise StrategyError("second move must answer in the opened field")
    j = s1
    if f2 != j:
        raise StrategyError("third move must be in the field the reply pointed at")
    k = s2
    if k == i:
        raise StrategyError("third move (j, i) is outside this strategy's scope")
    return i, j, k


def blocker_avoid2_move(state: BoardState, history: Sequence[CellAddr]) -> CellAddr:
    # Before the prefix is complete (O's very first reply to the double),
    # any answer keeps the strategy's guarantees; take the lowest spot.
    if len(history) == 1:
        i, s0 = history[0]
        if i != s0:
            raise StrategyError("blocker-avoid2 requires a double first move")
        moves = legal_moves(state)
        if not moves:
            raise StrategyError("no legal move")
        return moves[0]
    i, j, k = _avoid2_prefix(history)
    if k == j:
        return blocker_move(state, j, i, (i, j))
    return blocker_move(state, k, i, (k, i))


# --- sampling adversaries ---------------------------------------------------

def move_rng(seed: Optional[int], ply: int) -> random.Random:
    """Per-move generator derived from (seed, ply), so choices are a pure
    function of history and seed."""
    s = (seed or 0) & _M64
    mix = (s * 0x9E3779B97F4A7C15 + ply * 0xBF58476D1CE4E5B9 + 0xD1B54A32D192ED03) & _M64
    return random.Random(mix)


def random_move(state: BoardState, rng: random.Random) -> CellAddr:
    moves = legal_moves(state)
    if not moves:
        raise StrategyError("no legal move")
    return moves[rng.randrange(len(moves))]


def greedy_move(state: BoardState, rng: random.Random) -> CellAddr:
    """Prefers game-winning moves, then field wins that align two won
    fields, then any field win, else a seeded-random legal move."""
    moves = legal_moves(state)
    if not moves:
        raise StrategyError("no legal move")
    mover = state.to_move
    plane = state.x_bits if mover == X else state.o_bits
    won_mark = WON_X if mover == X else WON_O
    fs = state.field_status
    won_mask = 0
    for i in range(9):
        if fs[i] == won_mark:
            won_mask |= 1 << i
    wins_game: list[CellAddr] = []
    aligns: list[CellAddr] = []
    wins_field: list[CellAddr] = []
    for f, s in moves:
        if fs[f] != OPEN:
            continue
        if HAS_LINE[field_bits(plane, f) | (1 << s)]:
            new_mask = won_mask | (1 << f)
            if HAS_LINE[new_mask]:
                wins_game.append((f, s))
            else:
                for line in ((0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6),
                             (1, 4, 7), (2, 5, 8), (0, 4, 8), (2, 4, 6)):
                    have = sum(1 for q in line if new_mask >> q & 1)
                    blocked = any(fs[q] != OPEN and not new_mask >> q & 1 for q in line)
                    if have == 2 and not blocked:
                        aligns.append((f, s))
                        break
                else:
                    wins_field.append((f, s))
    for bucket in (wins_game, aligns, wins_field):
        if bucket:
            return bucket[rng.randrange(len(bucket))]
    return moves[rng.randrange(len(moves))]


# --- history-facing operations ---------------------------------------------

def _replay_history(history: Sequence[CellAddr]) -> BoardState:
    state = new_game()
    for addr in history:
        try:
            state = apply_move(state, addr)
        except IllegalMoveError as exc:
            raise StrategyError(f"illegal history at ply {state.ply + 1}: {exc}") from exc
    return state


def _require_turn(state: BoardState, side: str) -> None:
    if state.status != IN_PROGRESS:
        raise StrategyError("game is over")
    if state.to_move != side:
        raise StrategyError(f"not {side}'s turn")


def xavier_choose(history: Sequence[CellAddr]) -> CellAddr:
    """Winning-strategy move for a history; rejects histories where X
    deviated from the strategy earlier."""
    state = new_game()
    for addr in history:
        if state.to_move == X:
            expected = xavier_move(state)
            if tuple(addr) != expected:
                raise StrategyError(
                    f"inconsistent history: X played {tuple(addr)} at ply "
                    f"{state.ply + 1}, the strategy plays {expected}"
                )
        try:
            state = apply_move(state, addr)
        except IllegalMoveError as exc:
            raise StrategyError(f"illegal history at ply {state.ply + 1}: {exc}") from exc
    _require_turn(state, X)
    return xavier_move(state)


def lbs_choose(history: Sequence[CellAddr]) -> CellAddr:
    state = _replay_history(history)
    _require_turn(state, O)
    return lbs_move(state)


def blocker_avoid_choose(history: Sequence[CellAddr], i: int, j: int) -> CellAddr:
    if i == j:
        raise StrategyError("blocker-avoid requires i != j")
    if not history or tuple(history[0]) != (i, j):
        raise StrategyError(f"history does not open with ({i}, {j})")
    state = _replay_history(history)
    _require_turn(state, O)
    return blocker_avoid_move(state, history)


def blocker_avoid2_choose(history: Sequence[CellAddr]) -> CellAddr:
    state = _replay_history(history)
    _require_turn(state, O)
    return blocker_avoid2_move(state, history)


def random_choose(history: Sequence[CellAddr], seed: Optional[int] = None) -> CellAddr:
    state = _replay_history(history)
    if state.status != IN_PROGRESS:
        raise StrategyError("game is over")
    return random_move(state, move_rng(seed, state.ply))


def greedy_choose(history: Sequence[CellAddr], seed: Optional[int] = None) -> CellAddr:
    state = _replay_history(history)
    if state.status != IN_PROGRESS:
        raise StrategyError("game is over")
    return greedy_move(state, move_rng(seed, state.ply))


def choose(strategy_id: str, ctx: StrategyContext) -> CellAddr:
    """Dispatch to one strategy by id. The returned address is always legal
    for the position the history reconstructs to."""
    h = ctx.history
    if strategy_id == "xavier-winning":
        return xavier_choose(h)
    if strategy_id == "lbs":
        return lbs_choose(h)
    if strategy_id == "blocker-avoid":
        if not h:
            raise StrategyError("blocker-avoid is defined after X's first move")
        i, j = h[0]
        return blocker_avoid_choose(h, i, j)
    if strategy_id == "blocker-avoid2":
        return blocker_avoid2_choose(h)
    if strategy_id == "random":
        return random_choose(h, ctx.seed)
    if strategy_id == "greedy":
        return greedy_choose(h, ctx.seed)
    raise StrategyError(f"unknown strategy id {strategy_id!r}")


# --- game runner ------------------------------------------------------------

Mover = Callable[[BoardState, list[CellAddr]], CellAddr]


def make_mover(strategy_id: str, seed: Optional[int] = None) -> Mover:
    """A fast, stateless mover for use inside a game loop.

    Unlike ``choose`` this trusts the loop to feed consistent histories and
    skips re-validation; determinism and legality are unchanged.
    """
    if strategy_id == "xavier-winning":
        return lambda state, history: xavier_move(state)
    if strategy_id == "lbs":
        return lambda state, history: lbs_move(state)
    if strategy_id == "blocker-avoid":
        return blocker_avoid_move
    if strategy_id == "blocker-avoid2":
        return blocker_avoid2_move
    if strategy_id == "random":
        return lambda state, history: random_move(state, move_rng(seed, state.ply))
    if strategy_id == "greedy":
        return lambda state, history: greedy_move(state, move_rng(seed, state.ply))
    raise StrategyError(f"unknown strategy id {strategy_id!r}")


def move_label(strategy_id: str, state: BoardState, history: Sequence[CellAddr]) -> Optional[str]:
    """Phase annotation for the move the strategy is about to play."""
    if strategy_id == "xavier-winning":
        return xavier_phase(state)
    if strategy_id == "lbs":
        return "lbs"
    if strategy_id == "blocker-avoid" and history:
        i, j = history[0]
        return "lbs" if blocker_phase_over(state, (i, j)) else "blocking"
    if strategy_id == "blocker-avoid2" and len(history) >= 3:
        i, j, k = _avoid2_prefix(history)
        targets = (i, j) if k == j else (k, i)
        return "lbs" if blocker_phase_over(state, targets) else "blocking"
    return None


def play_game(
    x_mover: Mover,
    o_mover: Mover,
    *,
    prefix: Sequence[CellAddr] = (),
    ply_cap: Optional[int] = None,
    labels: Optional[dict[str, str]] = None,
) -> tuple[GameRecord, BoardState]:
    """Run a game to its end (or ``ply_cap``) and return record and state.

    ``prefix`` moves are applied verbatim before the movers take over.
    ``labels`` maps a seat ("X"/"O") to a strategy id whose phase labels
    should be recorded as per-move annotations.
    """
    state = new_game()
    history: list[CellAddr] = []
    annotations: Optional[list[Optional[str]]] = [] if labels else None
    for addr in prefix:
        state = apply_move(state, addr)
        history.append(addr)
        if annotations is not None:
            annotations.append(None)
    while state.status == IN_PROGRESS and (ply_cap is None or state.ply < ply_cap):
        mover = x_mover if state.to_move == X else o_mover
        if annotations is not None:
            sid = (labels or {}).get(state.to_move)
            annotations.append(move_label(sid, state, history) if sid else None)
        addr = mover(state, history)
        state = apply_move(state, addr)
        history.append(addr)
    record = GameRecord.from_addrs(history, state.status)
    record.annotations = annotations
    return record, state
