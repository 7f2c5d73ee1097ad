// Keyboard handling. Arrows or WASD walk (walking also turns the
// avatar), Shift+arrows turn in place, R toggles the raised phone.
// The frame functions are pure so the rate bound is testable: at most
// one message per kind per animation frame.

import { raiseMessage, turnMessage, walkMessage } from "./protocol.js";

export interface FrameInput {
  up: boolean;
  down: boolean;
  left: boolean;
  right: boolean;
  turnOnly: boolean;
  toggleRaise: boolean;
}

/** Angle for the held direction keys; null when none are held. */
export function directionAngle(k: {
  up: boolean;
  down: boolean;
  left: boolean;
  right: boolean;
}): number | null {
  const dx = (k.right ? 1 : 0) - (k.left ? 1 : 0);
  const dy = (k.up ? 1 : 0) - (k.down ? 1 : 0);
  if (dx === 0 && dy === 0) return null;
  return Math.atan2(dy, dx);
}

/**
 * Messages to send this frame. `raised` is the latest raised flag the
 * server reported; a toggle request flips it. Returns the message
 * texts plus the flag the client just asked for.
 */
export function messagesForFrame(
  input: FrameInput,
  raised: boolean,
): { lines: string[]; raised: boolean } {
  const lines: string[] = [];
  let want = raised;
  if (input.toggleRaise) {
    want = !raised;
    lines.push(raiseMessage(want));
  }
  const angle = directionAngle(input);
  if (angle !== null) {
    lines.push(input.turnOnly ? turnMessage(angle) : walkMessage(angle));
  }
  return { lines, raised: want };
}

const KEY_DIRS: Record<string, "up" | "down" | "left" | "right"> = {
  ArrowUp: "up",
  ArrowDown: "down",
  ArrowLeft: "left",
  ArrowRight: "right",
  w: "up",
  s: "down",
  a: "left",
  d: "right",
  W: "up",
  S: "down",
  A: "left",
  D: "right",
};

export class Keyboard {
  private held = { up: false, down: false, left: false, right: false };
  private shift = false;
  private raisePresses = 0;

  attach(target: Window): void {
    target.addEventListener("keydown", (ev) => {
      this.shift = ev.shiftKey;
      const dir = KEY_DIRS[ev.key];
      if (dir) {
        this.held[dir] = true;
        ev.preventDefault();
        return;
      }
      if ((ev.key === "r" || ev.key === "R") && !ev.repeat) {
        this.raisePresses += 1;
      }
    });
    target.addEventListener("keyup", (ev) => {
      this.shift = ev.shiftKey;
      const dir = KEY_DIRS[ev.key];
      if (dir) this.held[dir] = false;
    });
    // dropping focus mid-keypress would otherwise wedge a key on
    target.addEventListener("blur", () => {
      this.held = { up: false, down: false, left: false, right: false };
      this.shift = false;
    });
  }

  /** Snapshot for one frame; clears the R-key edge counter. */
  frame(): FrameInput {
    const toggle = this.raisePresses % 2 === 1; // two presses cancel out
    this.raisePresses = 0;
    return { ...this.held, turnOnly: this.shift, toggleRaise: toggle };
  }
}
