import type { GameEvent, ServiceErrorBody, Snapshot } from "./types.js";

/**
 * Console state and its pure reducer.
 *
 * Rendered values always come from the last acknowledged server snapshot;
 * the console never extrapolates locally.  Stream snapshots carry a
 * monotonically increasing sequence number; anything at or below the
 * current one is discarded as stale.
 */

export interface LogEntry {
  event: GameEvent;
  seq: number;
}

export interface ConsoleState {
  sessionId: string | null;
  snapshot: Snapshot | null;
  /** events posted but not yet acknowledged, in submission order */
  pending: GameEvent[];
  /** acknowledged events, in server acknowledgment order */
  log: LogEntry[];
  error: ServiceErrorBody | null;
  selectedStat: string | null;
}

export type Action =
  | { kind: "session-opened"; sessionId: string; snapshot: Snapshot }
  | { kind: "event-submitted"; event: GameEvent }
  | { kind: "event-acknowledged"; event: GameEvent; snapshot: Snapshot }
  | { kind: "event-rejected"; event: GameEvent; error: ServiceErrorBody }
  | { kind: "snapshot-received"; snapshot: Snapshot }
  | { kind: "stat-selected"; statId: string | null }
  | { kind: "error-cleared" };

export const initialState: ConsoleState = {
  sessionId: null,
  snapshot: null,
  pending: [],
  log: [],
  error: null,
  selectedStat: null,
};

function sameEvent(a: GameEvent, b: GameEvent): boolean {
  return JSON.stringify(a) === JSON.stringify(b);
}

function withoutFirst(queue: GameEvent[], event: GameEvent): GameEvent[] {
  const idx = queue.findIndex((e) => sameEvent(e, event));
  if (idx < 0) return queue;
  return [...queue.slice(0, idx), ...queue.slice(idx + 1)];
}

export function reduce(state: ConsoleState, action: Action): ConsoleState {
  switch (action.kind) {
    case "session-opened":
      return {
        ...initialState,
        sessionId: action.sessionId,
        snapshot: action.snapshot,
      };
    case "event-submitted":
      return { ...state, pending: [...state.pending, action.event] };
    case "event-acknowledged":
      return {
        ...state,
        pending: withoutFirst(state.pending, action.event),
        snapshot: action.snapshot,
        log: [...state.log, { event: action.event, seq: action.snapshot.seq }],
        error: null,
      };
    case "event-rejected":
      return {
        ...state,
        pending: withoutFirst(state.pending, action.event),
        error: action.error,
      };
    case "snapshot-received":
      if (
        state.snapshot !== null &&
        action.snapshot.seq <= state.snapshot.seq
      ) {
        return state; // stale push, discard
      }
      return { ...state, snapshot: action.snapshot };
    case "stat-selected":
      return { ...state, selectedStat: action.statId };
    case "error-cleared":
      return { ...state, error: null };
  }
}

/** UNDO targets the last acknowledged event; unavailable on a fresh log. */
export function canUndo(state: ConsoleState): boolean {
  return state.log.length > 0 && state.pending.length === 0;
}

/** Entry of the what-if panel: verbatim value string plus sort helpers. */
export interface SensitivityRow {
  statId: string;
  value: string;
  magnitude: number;
  sign: -1 | 0 | 1;
}

/**
 * Rows for the what-if panel, sorted by magnitude (desc).  Values are the
 * snapshot's decimal strings untouched; parsing is for ordering only.
 * Returns null when the panel is disabled (no snapshot or t = 1).
 */
export function sensitivityRows(state: ConsoleState): SensitivityRow[] | null {
  const snap = state.snapshot;
  if (snap === null || Number.parseFloat(snap.t) >= 1) return null;
  const rows: SensitivityRow[] = Object.entries(snap.sensitivity).map(
    ([statId, value]) => {
      const x = Number.parseFloat(value);
      return {
        statId,
        value,
        magnitude: Math.abs(x),
        sign: x > 0 ? 1 : x < 0 ? -1 : 0,
      };
    },
  );
  rows.sort((a, b) => b.magnitude - a.magnitude);
  return rows;
}

/** The late-game amplification factor 1/sqrt(1-t) (display-only). */
export function endgameScale(state: ConsoleState): number | null {
  const snap = state.snapshot;
  if (snap === null) return null;
  const t = Number.parseFloat(snap.t);
  if (t >= 1) return null;
  return 1 / Math.sqrt(1 - t);
}
