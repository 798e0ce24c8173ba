/** Wire types mirrored from the game service. The UI never derives game
 * rules itself: every field here comes verbatim from the server. */

export type Player = "X" | "O";
export type GameStatus = "InProgress" | "WonX" | "WonO" | "Draw";
export type FieldStatus = "Open" | "WonX" | "WonO" | "DrawnFull";

export interface MoveAddr {
  f: number;
  s: number;
}

export interface WireMove extends MoveAddr {
  p: Player;
}

export interface StateView {
  id: string;
  /** 81 chars of '.', 'X', 'O'; index = 9 * field + spot. */
  cells: string;
  fieldStatus: FieldStatus[];
  forcedField: number | null;
  toMove: Player;
  ply: number;
  status: GameStatus;
  legalMoves: MoveAddr[];
  moves: WireMove[];
  annotations: (string | null)[];
  xController: string;
  oController: string;
  botMove?: WireMove | null;
}

export interface StrategyInfo {
  id: string;
  seats: string;
}

export interface ApiError {
  error: string;
  detail: string;
}
