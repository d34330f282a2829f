import type { GameConsole } from "./ui.js";
import type { GameEvent } from "./types.js";

/**
 * Scripted-entry driver: feeds events through the exact submit path the
 * UI buttons use, then reads results back from the rendered DOM, so a
 * scripted game exercises the same code as a human scorekeeper.
 */
export class ScriptDriver {
  constructor(readonly gameConsole: GameConsole) {}

  /** Enter events one at a time, awaiting each acknowledgment. */
  async enter(events: GameEvent[]): Promise<void> {
    for (const event of events) {
      await this.gameConsole.submit(event);
    }
  }

  /** Click a control button by its rendered event payload. */
  clickEvent(event: GameEvent): boolean {
    const payload = JSON.stringify(event);
    const buttons =
      this.gameConsole.root.querySelectorAll<HTMLButtonElement>(".event-btn");
    for (const btn of buttons) {
      if (btn.dataset.event === payload && !btn.disabled) {
        btn.click();
        return true;
      }
    }
    return false;
  }

  /** The win-probability series as rendered (verbatim decimal strings). */
  renderedPwSeries(): string[] {
    const points =
      this.gameConsole.root.querySelectorAll<HTMLElement>(".pw-point");
    return Array.from(points, (p) => p.textContent ?? "");
  }

  /** The gauge value as rendered. */
  renderedPw(): string {
    return (
      this.gameConsole.root.querySelector(".pw-value")?.textContent ?? ""
    );
  }

  renderedScore(): { a: string; b: string } {
    return {
      a: this.gameConsole.root.querySelector(".score-a")?.textContent ?? "",
      b: this.gameConsole.root.querySelector(".score-b")?.textContent ?? "",
    };
  }

  renderedError(): { category: string; message: string } | null {
    const box = this.gameConsole.root.querySelector(".error-box");
    if (!box || (box as HTMLElement).hidden) return null;
    return {
      category: box.querySelector(".error-category")?.textContent ?? "",
      message: box.querySelector(".error-message")?.textContent ?? "",
    };
  }

  renderedWhatIf(): { statId: string; value: string }[] {
    const rows =
      this.gameConsole.root.querySelectorAll<HTMLElement>(".what-if-row");
    return Array.from(rows, (r) => ({
      statId: r.dataset.statId ?? "",
      value: r.dataset.value ?? "",
    }));
  }
}
