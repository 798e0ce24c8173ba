/** Pure view-model helpers. Everything is computed from the server's state
 * view: the clickable set is exactly the server's legal-move list, and the
 * highlighted field is whatever field those moves share. */

import type { Player, StateView } from "./types.js";

export function cellKey(f: number, s: number): string {
  return `${f}.${s}`;
}

export function humanSeat(view: StateView): Player | null {
  if (view.xController === "human" && view.oController === "human") {
    return view.toMove;
  }
  if (view.xController === "human") return "X";
  if (view.oController === "human") return "O";
  return null;
}

/** Cells the user may click right now: the server's legal moves, but only
 * while the game runs and a human is on turn. */
export function clickableCells(view: StateView): Set<string> {
  const out = new Set<string>();
  if (view.status !== "InProgress") return out;
  const seat = humanSeat(view);
  if (seat === null || view.toMove !== seat) return out;
  for (const m of view.legalMoves) out.add(cellKey(m.f, m.s));
  return out;
}

/** The field shared by every legal move, or null on a free choice. */
export function highlightedField(view: StateView): number | null {
  if (view.status !== "InProgress" || view.legalMoves.length === 0) return null;
  const first = view.legalMoves[0].f;
  return view.legalMoves.every((m) => m.f === first) ? first : null;
}

/** Latest strategy-phase annotation reported by the service, if any. */
export function phaseLabel(view: StateView): string {
  for (let k = view.annotations.length - 1; k >= 0; k--) {
    const a = view.annotations[k];
    if (a) return a;
  }
  return "n/a";
}

/** Move history in the compact f.s notation used by the CLI logs. */
export function historyText(view: StateView): string {
  return view.moves.map((m) => cellKey(m.f, m.s)).join(" ");
}

export function statusBanner(view: StateView): string | null {
  switch (view.status) {
    case "WonX":
      return `X wins after ${view.ply} plies`;
    case "WonO":
      return `O wins after ${view.ply} plies`;
    case "Draw":
      return "drawn: board full with no winner";
    default:
      return null;
  }
}

export function fieldOverlay(view: StateView, f: number): string | null {
  switch (view.fieldStatus[f]) {
    case "WonX":
      return "X";
    case "WonO":
      return "O";
    case "DrawnFull":
      return "=";
    default:
      return null;
  }
}
