import { describe, expect, it } from "vitest";

import type { StateView } from "../src/types.js";
import {
  clickableCells,
  highlightedField,
  historyText,
  humanSeat,
  phaseLabel,
  statusBanner,
} from "../src/view.js";

function baseView(overrides: Partial<StateView> = {}): StateView {
  return {
    id: "t",
    cells: ".".repeat(81),
    fieldStatus: Array(9).fill("Open"),
    forcedField: null,
    toMove: "X",
    ply: 0,
    status: "InProgress",
    legalMoves: [],
    moves: [],
    annotations: [],
    xController: "human",
    oController: "lbs",
    ...overrides,
  };
}

describe("clickableCells", () => {
  it("is exactly the server legal-move list on the human's turn", () => {
    const view = baseView({
      legalMoves: [
        { f: 4, s: 0 },
        { f: 4, s: 7 },
      ],
    });
    expect(clickableCells(view)).toEqual(new Set(["4.0", "4.7"]));
  });

  it("is empty when a bot is on turn or the game is over", () => {
    const botTurn = baseView({
      toMove: "O",
      legalMoves: [{ f: 1, s: 1 }],
    });
    expect(clickableCells(botTurn).size).toBe(0);
    const done = baseView({ status: "WonX", legalMoves: [] });
    expect(clickableCells(done).size).toBe(0);
  });

  it("follows the side to move in hot-seat games", () => {
    const hotSeat = baseView({
      oController: "human",
      toMove: "O",
      legalMoves: [{ f: 2, s: 2 }],
    });
    expect(humanSeat(hotSeat)).toBe("O");
    expect(clickableCells(hotSeat)).toEqual(new Set(["2.2"]));
  });
});

describe("highlightedField", () => {
  it("is the field shared by all legal moves", () => {
    const view = baseView({
      forcedField: 4,
      legalMoves: [
        { f: 4, s: 0 },
        { f: 4, s: 8 },
      ],
    });
    expect(highlightedField(view)).toBe(4);
  });

  it("is null on a free choice", () => {
    const view = baseView({
      legalMoves: [
        { f: 0, s: 0 },
        { f: 5, s: 1 },
      ],
    });
    expect(highlightedField(view)).toBeNull();
  });
});

describe("phase and history panels", () => {
  it("shows the latest bot annotation", () => {
    const view = baseView({
      annotations: ["opening", null, "opening", null, "middlegame", null],
    });
    expect(phaseLabel(view)).toBe("middlegame");
    expect(phaseLabel(baseView())).toBe("n/a");
  });

  it("renders history in f.s notation", () => {
    const view = baseView({
      moves: [
        { p: "X", f: 4, s: 4 },
        { p: "O", f: 4, s: 7 },
        { p: "X", f: 7, s: 4 },
      ],
    });
    expect(historyText(view)).toBe("4.4 4.7 7.4");
  });

  it("banners terminal results", () => {
    expect(statusBanner(baseView({ status: "WonX", ply: 31 }))).toContain("X wins");
    expect(statusBanner(baseView())).toBeNull();
  });
});
