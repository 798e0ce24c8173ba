/** Page controller: new-game form, click-to-move with a single in-flight
 * request, history and phase panels. The server is the only rules engine;
 * rejected moves simply re-render the last server state with the reason. */

import { ApiClient, ServiceError } from "./api.js";
import { renderBoard } from "./board.js";
import type { StateView, StrategyInfo } from "./types.js";
import { historyText, phaseLabel } from "./view.js";

export class GameController {
  view: StateView | null = null;
  busy = false;
  message = "";

  constructor(
    private readonly api: ApiClient,
    private readonly boardRoot: HTMLElement,
    private readonly statusRoot: HTMLElement,
    private readonly historyRoot: HTMLElement,
  ) {}

  async newGame(x: string, o: string): Promise<void> {
    this.busy = true;
    this.render();
    try {
      this.view = await this.api.createGame(x, o);
      this.message = "";
    } catch (err) {
      this.message = describe(err);
    } finally {
      this.busy = false;
      this.render();
    }
  }

  async submitMove(f: number, s: number): Promise<void> {
    if (this.busy || !this.view) return;
    this.busy = true;
    this.render(); // optimistic disable while the request runs
    try {
      this.view = await this.api.postMove(this.view.id, f, s);
      this.message = "";
    } catch (err) {
      this.message = describe(err);
      if (!(err instanceof ServiceError) && this.view) {
        // network failure: refresh to the server's authoritative state
        try {
          this.view = await this.api.getState(this.view.id);
        } catch {
          /* keep the last view; the retry affordance is the next click */
        }
      }
    } finally {
      this.busy = false;
      this.render();
    }
  }

  render(): void {
    if (this.view) {
      renderBoard(this.boardRoot, this.view, (f, s) => void this.submitMove(f, s), this.busy);
      const v = this.view;
      const bits = [
        `ply ${v.ply}`,
        `to move: ${v.toMove}`,
        `phase: ${phaseLabel(v)}`,
        `status: ${v.status}`,
      ];
      if (this.message) bits.push(this.message);
      this.statusRoot.textContent = bits.join("  |  ");
      this.historyRoot.textContent = historyText(v) || "(no moves yet)";
    } else {
      this.statusRoot.textContent = this.message || "start a game";
    }
  }
}

function describe(err: unknown): string {
  if (err instanceof ServiceError) {
    const human: Record<string, string> = {
      occupied: "that cell is already taken",
      "wrong-field": "you must play in the highlighted field",
      terminal: "the game is over",
      "not-your-turn": "wait for the bot's reply",
      "strategy-error": "that bot cannot answer this opening",
    };
    return human[err.code] ?? `${err.code}: ${err.message}`;
  }
  return "network problem: click a cell to retry";
}

function option(value: string, label: string): HTMLOptionElement {
  const el = document.createElement("option");
  el.value = value;
  el.textContent = label;
  return el;
}

export async function bootstrap(root: HTMLElement, api: ApiClient): Promise<GameController> {
  const form = document.createElement("div");
  form.className = "setup";
  const seatSelect = document.createElement("select");
  seatSelect.id = "seat";
  seatSelect.appendChild(option("X", "play X (first)"));
  seatSelect.appendChild(option("O", "play O (second)"));
  const botSelect = document.createElement("select");
  botSelect.id = "bot";
  const startBtn = document.createElement("button");
  startBtn.id = "start";
  startBtn.textContent = "new game";
  form.append("you: ", seatSelect, " bot: ", botSelect, " ", startBtn);

  const boardRoot = document.createElement("div");
  boardRoot.id = "board-root";
  const statusRoot = document.createElement("div");
  statusRoot.id = "status";
  const historyRoot = document.createElement("pre");
  historyRoot.id = "history";
  root.append(form, boardRoot, statusRoot, historyRoot);

  let strategies: StrategyInfo[] = [];
  try {
    strategies = await api.listStrategies();
  } catch {
    statusRoot.textContent = "service unreachable";
  }
  const controller = new GameController(api, boardRoot, statusRoot, historyRoot);

  const fillBots = () => {
    const botSeat = seatSelect.value === "X" ? "O" : "X";
    botSelect.textContent = "";
    for (const s of strategies) {
      if (s.seats.includes(botSeat)) botSelect.appendChild(option(s.id, s.id));
    }
  };
  fillBots();
  seatSelect.addEventListener("change", fillBots);
  startBtn.addEventListener("click", () => {
    const humanSeat = seatSelect.value;
    const bot = botSelect.value;
    const x = humanSeat === "X" ? "human" : bot;
    const o = humanSeat === "O" ? "human" : bot;
    void controller.newGame(x, o);
  });
  controller.render();
  return controller;
}
