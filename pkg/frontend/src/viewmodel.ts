/**
 * Pure mapping from a server snapshot to what the panel draws. The UI keeps
 * no state of its own beyond the last snapshot, so rendering the same
 * snapshot always produces the same view.
 */

import type { Snapshot } from "./protocol.js";

export interface PanelView {
  /** 2x16 single characters, verbatim from the snapshot (spaces kept). */
  cells: string[][];
  lockLabel: "LOCKED" | "OPEN";
  lockClass: "lamp-locked" | "lamp-open";
  alarmOn: boolean;
  mode: string;
  wrong: number;
  tick: number;
}

export function toView(snap: Snapshot): PanelView {
  return {
    cells: snap.lcd.map((line) => Array.from(line)),
    lockLabel: snap.lock ? "LOCKED" : "OPEN",
    lockClass: snap.lock ? "lamp-locked" : "lamp-open",
    alarmOn: snap.alarm,
    mode: snap.mode,
    wrong: snap.wrong,
    tick: snap.tick,
  };
}
