"""ASCII board rendering: a 3x3 arrangement of 3x3 fields.

Field 0 sits top-left and indices run row-major, matching the addressing
used everywhere else; the active (forced) field's rows are bracketed.
"""

from __future__ import annotations

from .engine import BoardState, O, OPEN, X


def _cell_char(state: BoardState, f: int, s: int) -> str:
    bit = 1 << (f * 9 + s)
    if state.x_bits & bit:
        return "X"
    if state.o_bits & bit:
        return "O"
    return "."


def render_state(state: BoardState) -> str:
    lines = []
    for big_row in range(3):
        if big_row:
            lines.append("--------+---------+--------")
        for sub_row in range(3):
            segments = []
            for big_col in range(3):
                f = 3 * big_row + big_col
                cells = " ".join(_cell_char(state, f, 3 * sub_row + s) for s in range(3))
                if f == state.forced_field:
                    segments.append(f"[{cells}]")
                else:
                    segments.append(f" {cells} ")
            lines.append(" | ".join(segments))
    notes = []
    if state.forced_field is not None:
        notes.append(f"active field: {state.forced_field}")
    elif state.status == "InProgress":
        notes.append("active field: free choice")
    decided = [f"field {i}: {st}" for i, st in enumerate(state.field_status) if st != OPEN]
    if decided:
        notes.append("; ".join(decided))
    notes.append(f"to move: {state.to_move}  ply: {state.ply}  status: {state.status}")
    return "\n".join(lines + notes)
