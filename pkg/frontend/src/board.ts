/** DOM rendering of the 3x3-of-3x3 board from a server state view. */

import type { StateView } from "./types.js";
import {
  cellKey,
  clickableCells,
  fieldOverlay,
  highlightedField,
  statusBanner,
} from "./view.js";

export type MoveHandler = (f: number, s: number) => void;

export function renderBoard(
  root: HTMLElement,
  view: StateView,
  onMove: MoveHandler,
  busy: boolean,
): void {
  root.textContent = "";
  const clickable = clickableCells(view);
  const highlight = highlightedField(view);
  const board = document.createElement("div");
  board.className = "board";
  for (let f = 0; f < 9; f++) {
    const fieldEl = document.createElement("div");
    fieldEl.className = "field";
    fieldEl.dataset.field = String(f);
    if (f === highlight) fieldEl.classList.add("active");
    const overlay = fieldOverlay(view, f);
    if (overlay) {
      fieldEl.classList.add("decided");
      const mark = document.createElement("div");
      mark.className = "overlay";
      mark.textContent = overlay;
      fieldEl.appendChild(mark);
    }
    for (let s = 0; s < 9; s++) {
      const cell = document.createElement("button");
      cell.className = "cell";
      cell.dataset.cell = cellKey(f, s);
      const mark = view.cells[f * 9 + s];
      cell.textContent = mark === "." ? "" : mark;
      const allowed = !busy && clickable.has(cellKey(f, s));
      cell.disabled = !allowed;
      if (allowed) {
        cell.classList.add("clickable");
        cell.addEventListener("click", () => onMove(f, s));
      }
      fieldEl.appendChild(cell);
    }
    board.appendChild(fieldEl);
  }
  root.appendChild(board);
  const banner = statusBanner(view);
  if (banner) {
    const el = document.createElement("div");
    el.className = "banner";
    el.textContent = banner;
    root.appendChild(el);
  }
}
