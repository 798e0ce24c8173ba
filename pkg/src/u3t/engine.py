"""Rules engine for ultimate tic-tac-toe.

The board is 9 fields of 9 spots each; a cell is addressed ``(field, spot)``
with both indices in 0..8, row-major from the top-left. Two 81-bit occupancy
planes (one per player) back all move generation and line tests; cell
``(f, s)`` lives at bit ``9*f + s``.

Field and board results latch: the first completed line in an open field owns
that field forever, and the game ends the moment a player owns three fields
in a line.
"""

from __future__ import annotations

from typing import NamedTuple, Optional, Sequence

# Player marks. X always moves at odd plies (1, 3, ...), O at even plies.
X = "X"
O = "O"

# Per-field status. Won statuses never change once set, even if the other
# player later completes a line in the same field.
OPEN = "Open"
WON_X = "WonX"
WON_O = "WonO"
DRAWN_FULL = "DrawnFull"

# Whole-game status. Terminal statuses are absorbing.
IN_PROGRESS = "InProgress"
WON_X_GAME = "WonX"
WON_O_GAME = "WonO"
DRAW = "Draw"

# A cell address: (field, spot). Kept as a plain tuple for speed; the search
# code creates millions of these.
CellAddr = tuple[int, int]

LINES = (
    (0, 1, 2), (3, 4, 5), (6, 7, 8),
    (0, 3, 6), (1, 4, 7), (2, 5, 8),
    (0, 4, 8), (2, 4, 6),
)
LINE_MASKS = tuple(sum(1 << s for s in line) for line in LINES)
FULL9 = 0x1FF
FULL81 = (1 << 81) - 1

# HAS_LINE[m] is true iff the 9-bit occupancy m contains a completed line.
HAS_LINE = tuple(
    any(m & lm == lm for lm in LINE_MASKS) for m in range(512)
)
# EMPTY_SPOTS[m] lists the clear bits of a 9-bit occupancy, ascending.
EMPTY_SPOTS = tuple(
    tuple(s for s in range(9) if not m >> s & 1) for m in range(512)
)

_REASONS = ("occupied", "wrong-field", "terminal", "out-of-range", "turn-order")


class IllegalMoveError(ValueError):
    """A rejected move, carrying a machine-readable reason code.

    Reason codes: ``occupied`` (cell already marked), ``wrong-field`` (the
    forced-field constraint was violated), ``terminal`` (no moves accepted
    once the game is over), ``out-of-range`` (bad indices), ``turn-order``
    (a replayed move named the player not on turn).
    """

    def __init__(self, reason: str, addr: Optional[CellAddr] = None, detail: str = ""):
        assert reason in _REASONS
        self.reason = reason
        self.addr = addr
        msg = reason if not detail else f"{reason}: {detail}"
        super().__init__(msg)


class BoardState(NamedTuple):
    """Immutable position. ``apply_move`` returns a new state.

    ``forced_field`` is the field the side to move must play in, or None for
    a free choice (start of game, or the previous move's spot pointed at a
    full field). ``ply`` counts moves already played.
    """

    x_bits: int
    o_bits: int
    field_status: tuple[str, ...]
    forced_field: Optional[int]
    to_move: str
    ply: int
    status: str


def new_game() -> BoardState:
    return BoardState(0, 0, (OPEN,) * 9, None, X, 0, IN_PROGRESS)


def field_bits(bits: int, field: int) -> int:
    """The 9-bit occupancy slice of one field from an 81-bit plane."""
    return (bits >> (field * 9)) & FULL9


def is_field_full(state: BoardState, field: int) -> bool:
    return field_bits(state.x_bits | state.o_bits, field) == FULL9


def legal_moves(state: BoardState) -> list[CellAddr]:
    """All playable cells, ascending by (field, spot).

    Returns the empty spots of the forced field, or of the whole board on a
    free choice. Fields that are already won but not full still yield their
    empty cells: playing there is legal, it just cannot change the field's
    status. Terminal states return an empty list.
    """
    if state.status != IN_PROGRESS:
        return []
    occ = state.x_bits | state.o_bits
    f = state.forced_field
    if f is not None:
        return [(f, s) for s in EMPTY_SPOTS[(occ >> (f * 9)) & FULL9]]
    return [
        (f, s)
        for f in range(9)
        for s in EMPTY_SPOTS[(occ >> (f * 9)) & FULL9]
    ]


def apply_move(state: BoardState, addr: CellAddr) -> BoardState:
    """Play ``addr`` for the side to move and return the successor state.

    Latching: a line completed in an open field sets that field to the
    mover; a line completed in an already-decided field changes nothing.
    The game ends immediately when a player owns three fields in a line or
    the last cell is filled.

    Raises IllegalMoveError with a reason code instead of guessing.
    """
    if state.status != IN_PROGRESS:
        raise IllegalMoveError("terminal", addr)
    f, s = addr
    if not (0 <= f <= 8 and 0 <= s <= 8):
        raise IllegalMoveError("out-of-range", addr)
    if state.forced_field is not None and f != state.forced_field:
        raise IllegalMoveError(
            "wrong-field", addr, f"must play in field {state.forced_field}"
        )
    bit = 1 << (f * 9 + s)
    occ = state.x_bits | state.o_bits
    if occ & bit:
        raise IllegalMoveError("occupied", addr)

    mover = state.to_move
    if mover == X:
        x_bits, o_bits = state.x_bits | bit, state.o_bits
        mover_plane, won_mark = x_bits, WON_X
    else:
        x_bits, o_bits = state.x_bits, state.o_bits | bit
        mover_plane, won_mark = o_bits, WON_O
    occ |= bit

    fs = state.field_status
    status = state.status
    if fs[f] == OPEN:
        if HAS_LINE[(mover_plane >> (f * 9)) & FULL9]:
            fs = fs[:f] + (won_mark,) + fs[f + 1:]
            won_fields = 0
            for i in range(9):
                if fs[i] == won_mark:
                    won_fields |= 1 << i
            if HAS_LINE[won_fields]:
                status = WON_X_GAME if mover == X else WON_O_GAME
        elif (occ >> (f * 9)) & FULL9 == FULL9:
            fs = fs[:f] + (DRAWN_FULL,) + fs[f + 1:]
    if status == IN_PROGRESS and occ == FULL81:
        status = DRAW

    forced = s if (occ >> (s * 9)) & FULL9 != FULL9 else None
    return BoardState(
        x_bits, o_bits, fs, forced,
        O if mover == X else X, state.ply + 1, status,
    )


def field_line_winner(cells: Sequence[Optional[str]]) -> Optional[str]:
    """Structural line test over raw field contents, ignoring latching.

    ``cells`` is a 9-entry sequence of "X", "O" or None (spot order 0..8).
    Returns "X" or "O" when exactly one player has a completed line, "XO"
    when both do (the engine's latched field status is authoritative in that
    case), and None when neither does.
    """
    xm = om = 0
    for s, c in enumerate(cells):
        if c == X:
            xm |= 1 << s
        elif c == O:
            om |= 1 << s
        elif c is not None:
            raise ValueError(f"bad cell content {c!r} at spot {s}")
    if HAS_LINE[xm]:
        return "XO" if HAS_LINE[om] else X
    if HAS_LINE[om]:
        return O
    return None


def canonical_key(state: BoardState) -> tuple:
    """Hashable key identifying a position for memoization.

    Two states compare equal iff their (cells, field statuses, forced field,
    side to move) agree; ply and game status are derivable from those and are
    excluded. The encoding is exact, so distinct positions never collide.
    """
    return (
        state.x_bits,
        state.o_bits,
        state.field_status,
        state.forced_field,
        state.to_move,
    )


def cell_owner(state: BoardState, addr: CellAddr) -> Optional[str]:
    bit = 1 << (addr[0] * 9 + addr[1])
    if state.x_bits & bit:
        return X
    if state.o_bits & bit:
        return O
    return None


def cells_string(state: BoardState) -> str:
    """81-character rendering of the planes, '.'/'X'/'O', index = 9*field+spot."""
    out = []
    for i in range(81):
        bit = 1 << i
        out.append(X if state.x_bits & bit else O if state.o_bits & bit else ".")
    return "".join(out)


def count_marks(state: BoardState, player: str) -> int:
    plane = state.x_bits if player == X else state.o_bits
    return bin(plane).count("1")


def x_counts_per_field(state: BoardState) -> list[int]:
    """Number of X marks in each of the nine fields."""
    return [bin(field_bits(state.x_bits, f)).count("1") for f in range(9)]
