import { type ChildProcess, spawn } from "node:child_process";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import path from "node:path";

import type { GameEvent, Snapshot } from "../src/types.js";

export const FIXTURES_DIR = path.resolve(
  path.dirname(fileURLToPath(import.meta.url)),
  "../../src/gameflow/fixtures",
);

export function ryukyuOpponentTfs(): number {
  const doc = JSON.parse(
    readFileSync(path.join(FIXTURES_DIR, "opponents.json"), "utf-8"),
  ) as Record<string, string>;
  return Number.parseFloat(doc["Ryukyu"] ?? "0");
}

export function fixtureEvents(): GameEvent[] {
  const text = readFileSync(
    path.join(FIXTURES_DIR, "chiba_ryukyu_events.jsonl"),
    "utf-8",
  );
  return text
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as GameEvent);
}

export interface RunningService {
  baseUrl: string;
  stop: () => void;
}

/** Start the Python live-session service on an ephemeral port. */
export async function startService(): Promise<RunningService> {
  const port = 8100 + Math.floor(Math.random() * 800);
  const code = [
    "import sys, uvicorn",
    "from gameflow.service import create_app",
    "app = create_app(model_dir=sys.argv[1])",
    "uvicorn.run(app, host='127.0.0.1', port=int(sys.argv[2]), log_level='error')",
  ].join("\n");
  const proc: ChildProcess = spawn(
    "python3",
    ["-c", code, FIXTURES_DIR, String(port)],
    { stdio: ["ignore", "inherit", "inherit"] },
  );
  const baseUrl = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const resp = await fetch(`${baseUrl}/healthz`);
      if (resp.ok) break;
    } catch {
      /* not up yet */
    }
    if (Date.now() > deadline) {
      proc.kill();
      throw new Error("service did not come up within 30s");
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  return { baseUrl, stop: () => proc.kill() };
}

/** A snapshot with the sequence number stripped, for state comparison. */
export function withoutSeq(snap: Snapshot): Omit<Snapshot, "seq"> {
  const { seq: _seq, ...rest } = snap;
  return rest;
}
