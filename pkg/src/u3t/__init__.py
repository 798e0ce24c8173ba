"""Ultimate tic-tac-toe: rules engine, named strategies, bound verifier."""

from .engine import (
    BoardState,
    CellAddr,
    DRAW,
    DRAWN_FULL,
    IN_PROGRESS,
    IllegalMoveError,
    O,
    OPEN,
    WON_O,
    WON_O_GAME,
    WON_X,
    WON_X_GAME,
    X,
    apply_move,
    canonical_key,
    field_line_winner,
    legal_moves,
    new_game,
)
from .records import GameRecord, Move, ReplayError, replay, replay_states
from .strategies import (
    AnchorPair,
    STRATEGY_IDS,
    STRATEGY_SEATS,
    StrategyContext,
    StrategyError,
    choose,
    make_mover,
    play_game,
)
from .verifier import (
    PropertyVector,
    SearchBudget,
    VerificationReport,
    check_properties,
    count_x_per_field,
    verify_first_move,
    verify_lbs,
    verify_second_move,
    verify_xavier,
)

__all__ = [
    "AnchorPair",
    "BoardState",
    "CellAddr",
    "DRAW",
    "DRAWN_FULL",
    "GameRecord",
    "IN_PROGRESS",
    "IllegalMoveError",
    "Move",
    "O",
    "OPEN",
    "PropertyVector",
    "ReplayError",
    "STRATEGY_IDS",
    "STRATEGY_SEATS",
    "SearchBudget",
    "StrategyContext",
    "StrategyError",
    "VerificationReport",
    "WON_O",
    "WON_O_GAME",
    "WON_X",
    "WON_X_GAME",
    "X",
    "apply_move",
    "canonical_key",
    "check_properties",
    "choose",
    "count_x_per_field",
    "field_line_winner",
    "legal_moves",
    "make_mover",
    "new_game",
    "play_game",
    "replay",
    "replay_states",
    "verify_first_move",
    "verify_lbs",
    "verify_second_move",
    "verify_xavier",
]
