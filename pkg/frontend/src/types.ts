/**
 * Wire types for the live-session service.
 *
 * Every numeric field arrives as a decimal string with 17 significant
 * digits.  The console renders those strings verbatim; floats are parsed
 * only for geometry (chart coordinates, sort order), never re-serialized
 * into displayed values.
 */

export interface Snapshot {
  seq: number;
  step: number;
  t: string;
  score: { a: string; b: string };
  stats: Record<string, string>;
  on_court: string[];
  mt: string;
  pw: string;
  sensitivity: Record<string, string>;
  path: { t: string[]; mt: string[]; pw: string[] };
  iof: [string, string][];
  theta: string;
  epsilon: string;
  initial_pw: string;
}

export type GameEvent =
  | { type: "SCORE_FOR" | "SCORE_AGAINST"; points: 1 | 2 | 3 }
  | { type: "REB_DEF" | "REB_OFF" | "ASSIST" | "TURNOVER" | "FOUL_DRAWN" }
  | { type: "SUB_IN" | "SUB_OUT"; player: string }
  | { type: "TICK" }
  | { type: "UNDO" };

export interface SessionRequest {
  model_ref: string;
  opponent_tfs: number;
  grid_R?: number;
  theta?: number;
  epsilon?: number;
}

export interface ReplaySeries {
  t: string[];
  mt: string[];
  pw: string[];
  score_a: string[];
  score_b: string[];
}

export interface ServiceErrorBody {
  category: string;
  message: string;
}
