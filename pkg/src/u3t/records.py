"""Game records: ordered move lists with replay and two serializations.

JSON form:  {"moves": [{"p": "X", "f": 4, "s": 4}, ...], "result": "WonX"}
Text form:  space-separated "f.s" tokens, e.g. "4.4 4.7 7.4"

The JSON form carries the result and optional per-move annotations; the text
form is the compact notation used in logs. Both round-trip bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .engine import (
    BoardState,
    CellAddr,
    IN_PROGRESS,
    IllegalMoveError,
    O,
    X,
    apply_move,
    new_game,
)


class Move(NamedTuple):
    player: str
    addr: CellAddr
    ply: int  # 1-based; parity matches the player (X odd, O even)


@dataclass
class GameRecord:
    """An ordered list of moves, replayable from the empty board.

    ``annotations``, when present, is aligned with ``moves`` and carries
    strategy-phase labels (or None) for each move.
    """

    moves: list[Move] = field(default_factory=list)
    result: str = IN_PROGRESS
    annotations: Optional[list[Optional[str]]] = None

    def addrs(self) -> list[CellAddr]:
        return [m.addr for m in self.moves]

    def to_json_obj(self) -> dict:
        obj: dict = {
            "moves": [{"p": m.player, "f": m.addr[0], "s": m.addr[1]} for m in self.moves],
            "result": self.result,
        }
        if self.annotations is not None:
            obj["annotations"] = list(self.annotations)
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    def to_text(self) -> str:
        return " ".join(f"{m.addr[0]}.{m.addr[1]}" for m in self.moves)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "GameRecord":
        moves = []
        for k, raw in enumerate(obj.get("moves", [])):
            try:
                player, f, s = raw["p"], int(raw["f"]), int(raw["s"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"malformed move at index {k}: {raw!r}") from exc
            if player not in (X, O):
                raise ValueError(f"malformed move at index {k}: bad player {player!r}")
            moves.append(Move(player, (f, s), k + 1))
        return cls(
            moves=moves,
            result=obj.get("result", IN_PROGRESS),
            annotations=obj.get("annotations"),
        )

    @classmethod
    def from_json(cls, text: str) -> "GameRecord":
        return cls.from_json_obj(json.loads(text))

    @classmethod
    def from_text(cls, text: str) -> "GameRecord":
        """Parse "f.s" tokens; players alternate starting with X."""
        moves = []
        for k, token in enumerate(text.split()):
            try:
                f_str, s_str = token.split(".")
                addr = (int(f_str), int(s_str))
            except ValueError as exc:
                raise ValueError(f"malformed token at index {k}: {token!r}") from exc
            moves.append(Move(X if k % 2 == 0 else O, addr, k + 1))
        return cls(moves=moves)

    @classmethod
    def from_addrs(cls, addrs: list[CellAddr], result: str = IN_PROGRESS) -> "GameRecord":
        moves = [Move(X if k % 2 == 0 else O, a, k + 1) for k, a in enumerate(addrs)]
        return cls(moves=moves, result=result)


class ReplayError(ValueError):
    """Replay failed at move ``index`` (0-based) for ``reason``."""

    def __init__(self, index: int, reason: str, detail: str = ""):
        self.index = index
        self.reason = reason
        msg = f"illegal move at index {index} ({reason})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


def replay(record: GameRecord) -> BoardState:
    """Apply the record's moves in order from the empty board.

    Fails fast on the first illegal move with its index and the engine's
    reason code; a record whose stated player is not on turn fails with
    reason "turn-order".
    """
    state = new_game()
    for k, move in enumerate(record.moves):
        if move.player != state.to_move:
            raise ReplayError(k, "turn-order", f"{move.player} played out of turn")
        try:
            state = apply_move(state, move.addr)
        except IllegalMoveError as exc:
            raise ReplayError(k, exc.reason, str(exc)) from exc
    return state


def replay_states(record: GameRecord) -> list[BoardState]:
    """All intermediate states, from the empty board to the final position."""
    states = [new_game()]
    for k, move in enumerate(record.moves):
        if move.player != states[-1].to_move:
            raise ReplayError(k, "turn-order", f"{move.player} played out of turn")
        try:
            states.append(apply_move(states[-1], move.addr))
        except IllegalMoveError as exc:
            raise ReplayError(k, exc.reason, str(exc)) from exc
    return states
