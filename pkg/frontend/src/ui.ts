import { ServiceClient, ServiceError } from "./client.js";
import {
  type Action,
  type ConsoleState,
  canUndo,
  initialState,
  reduce,
  sensitivityRows,
} from "./state.js";
import type { GameEvent, SessionRequest } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const CHART_W = 640;
const CHART_H = 240;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/**
 * The live game console.  Every displayed number is the verbatim decimal
 * string of a service snapshot field; floats are parsed only to place
 * chart geometry.
 */
export class GameConsole {
  state: ConsoleState = initialState;
  private stopStream: (() => void) | null = null;

  constructor(
    readonly client: ServiceClient,
    readonly root: HTMLElement,
    readonly roster: string[] = [],
  ) {
    this.render();
  }

  dispatch(action: Action): void {
    this.state = reduce(this.state, action);
    this.render();
  }

  async open(req: SessionRequest): Promise<void> {
    const { session_id, snapshot } = await this.client.createSession(req);
    this.dispatch({ kind: "session-opened", sessionId: session_id, snapshot });
    this.stopStream = this.client.subscribe(session_id, (snap) =>
      this.dispatch({ kind: "snapshot-received", snapshot: snap }),
    );
  }

  close(): void {
    if (this.stopStream) this.stopStream();
    this.stopStream = null;
  }

  /**
   * Post one event through the service; the UI path every button uses.
   * Rejections surface the service's category inline and leave the
   * acknowledged state untouched.
   */
  async submit(event: GameEvent): Promise<void> {
    const sessionId = this.state.sessionId;
    if (sessionId === null) throw new Error("no open session");
    this.dispatch({ kind: "event-submitted", event });
    try {
      const snapshot = await this.client.postEvent(sessionId, event);
      this.dispatch({ kind: "event-acknowledged", event, snapshot });
    } catch (err) {
      if (err instanceof ServiceError) {
        this.dispatch({
          kind: "event-rejected",
          event,
          error: { category: err.category, message: err.message },
        });
        return;
      }
      throw err;
    }
  }

  // -- rendering --------------------------------------------------------------

  render(): void {
    this.root.textContent = "";
    this.root.append(
      this.renderScoreboard(),
      this.renderGauge(),
      this.renderPathChart(),
      this.renderControls(),
      this.renderRoster(),
      this.renderWhatIf(),
      this.renderLog(),
      this.renderError(),
    );
  }

  private renderScoreboard(): HTMLElement {
    const box = el("div", "scoreboard");
    const snap = this.state.snapshot;
    if (snap === null) return box;
    box.append(
      el("span", "score-a", snap.score.a),
      el("span", "score-sep", "–"),
      el("span", "score-b", snap.score.b),
      el("span", "clock", `step ${snap.step}, t = ${snap.t}`),
    );
    const stats = el("div", "stat-line");
    for (const [sid, value] of Object.entries(snap.stats)) {
      const cell = el("span", "stat-cell", `${sid} ${value}`);
      cell.dataset.statId = sid;
      cell.dataset.value = value;
      stats.append(cell);
    }
    box.append(stats);
    return box;
  }

  private renderGauge(): HTMLElement {
    const box = el("div", "pw-gauge");
    const snap = this.state.snapshot;
    if (snap === null) return box;
    const value = el("div", "pw-value", snap.pw);
    value.dataset.pw = snap.pw;
    const frac = Math.min(1, Math.max(0, Number.parseFloat(snap.pw)));
    const bar = el("div", "pw-bar");
    bar.style.width = `${(frac * 100).toFixed(2)}%`;
    const refs = el("div", "pw-refs");
    for (const [label, v] of [
      ["even", "0.5"],
      ["alert", snap.epsilon],
      ["pre-game", snap.initial_pw],
    ] as const) {
      const mark = el("span", `pw-ref pw-ref-${label}`, `${label} ${v}`);
      mark.dataset.refValue = v;
      refs.append(mark);
    }
    box.append(value, bar, refs);
    return box;
  }

  private renderPathChart(): HTMLElement {
    const box = el("div", "path-chart");
    const snap = this.state.snapshot;
    if (snap === null) return box;
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${CHART_W} ${CHART_H}`);

    const mts = snap.path.mt.map(Number.parseFloat);
    const lo = Math.min(...mts) - 0.02;
    const hi = Math.max(...mts) + 0.02;
    const x = (t: number) => t * CHART_W;
    const y = (v: number) => CHART_H - ((v - lo) / (hi - lo)) * CHART_H;

    for (const [a, b] of snap.iof) {
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("class", "iof-band");
      rect.setAttribute("x", String(x(Number.parseFloat(a))));
      rect.setAttribute("y", "0");
      rect.setAttribute(
        "width",
        String(x(Number.parseFloat(b)) - x(Number.parseFloat(a))),
      );
      rect.setAttribute("height", String(CHART_H));
      rect.dataset.from = a;
      rect.dataset.to = b;
      svg.append(rect);
    }

    const line = document.createElementNS(SVG_NS, "polyline");
    line.setAttribute("class", "mt-line");
    line.setAttribute(
      "points",
      snap.path.t
        .map(
          (t, i) =>
            `${x(Number.parseFloat(t)).toFixed(2)},${y(mts[i] ?? 0).toFixed(2)}`,
        )
        .join(" "),
    );
    svg.append(line);
    box.append(svg);

    // verbatim series for inspection / the scripted test driver
    const series = el("div", "pw-series");
    series.hidden = true;
    snap.path.pw.forEach((pw, i) => {
      const point = el("span", "pw-point", pw);
      point.dataset.t = snap.path.t[i] ?? "";
      point.dataset.mt = snap.path.mt[i] ?? "";
      series.append(point);
    });
    box.append(series);
    return box;
  }

  private renderControls(): HTMLElement {
    const box = el("div", "controls");
    const busy = this.state.pending.length > 0;
    const add = (label: string, event: GameEvent, disabled = false) => {
      const btn = el("button", "event-btn", label);
      btn.dataset.event = JSON.stringify(event);
      btn.disabled = busy || disabled || this.state.sessionId === null;
      btn.addEventListener("click", () => void this.submit(event));
      box.append(btn);
    };
    for (const points of [1, 2, 3] as const) {
      add(`+${points}`, { type: "SCORE_FOR", points });
      add(`opp +${points}`, { type: "SCORE_AGAINST", points });
    }
    add("def reb", { type: "REB_DEF" });
    add("off reb", { type: "REB_OFF" });
    add("assist", { type: "ASSIST" });
    add("turnover", { type: "TURNOVER" });
    add("foul drawn", { type: "FOUL_DRAWN" });
    add("tick", { type: "TICK" });
    add("undo", { type: "UNDO" }, !canUndo(this.state));
    return box;
  }

  private renderRoster(): HTMLElement {
    const box = el("div", "roster");
    const onCourt = new Set(this.state.snapshot?.on_court ?? []);
    const busy = this.state.pending.length > 0;
    for (const player of this.roster) {
      const btn = el(
        "button",
        onCourt.has(player) ? "player on-court" : "player off-court",
        player,
      );
      btn.dataset.player = player;
      btn.disabled = busy || this.state.sessionId === null;
      const event: GameEvent = onCourt.has(player)
        ? { type: "SUB_OUT", player }
        : { type: "SUB_IN", player };
      btn.addEventListener("click", () => void this.submit(event));
      box.append(btn);
    }
    return box;
  }

  private renderWhatIf(): HTMLElement {
    const box = el("div", "what-if");
    const rows = sensitivityRows(this.state);
    if (rows === null) {
      box.classList.add("disabled");
      box.append(el("div", "what-if-note", "final: no remaining swing"));
      return box;
    }
    for (const row of rows) {
      const cls =
        row.sign > 0 ? "positive" : row.sign < 0 ? "negative" : "zero";
      const item = el("div", `what-if-row ${cls}`);
      item.dataset.statId = row.statId;
      item.dataset.value = row.value;
      item.append(
        el("span", "what-if-stat", row.statId),
        el("span", "what-if-value", row.value),
      );
      if (row.statId === this.state.selectedStat) {
        item.classList.add("selected");
      }
      item.addEventListener("click", () =>
        this.dispatch({ kind: "stat-selected", statId: row.statId }),
      );
      box.append(item);
    }
    return box;
  }

  private renderLog(): HTMLElement {
    const box = el("ol", "event-log");
    for (const entry of this.state.log) {
      const item = el("li", "log-entry", entry.event.type);
      item.dataset.seq = String(entry.seq);
      box.append(item);
    }
    return box;
  }

  private renderError(): HTMLElement {
    const box = el("div", "error-box");
    const err = this.state.error;
    if (err === null) {
      box.hidden = true;
      return box;
    }
    box.append(
      el("span", "error-category", err.category),
      el("span", "error-message", err.message),
    );
    return box;
  }
}
