/**
 * Wire types for the simulator's control protocol: JSON messages over a
 * WebSocket, one object per message. The client sends key_down / key_up /
 * admin_reset / subscribe; the server answers with snapshots of the whole
 * observable panel and with error objects that leave the connection open.
 */

export const KEY_ROWS: readonly (readonly KeySymbol[])[] = [
  ["1", "2", "3"],
  ["4", "5", "6"],
  ["7", "8", "9"],
  ["*", "0", "#"],
];

export type KeySymbol =
  | "0" | "1" | "2" | "3" | "4" | "5" | "6" | "7" | "8" | "9" | "*" | "#";

export const LCD_ROWS = 2;
export const LCD_COLS = 16;

export interface Snapshot {
  tick: number;
  lcd: [string, string];
  lock: boolean;
  alarm: boolean;
  mode: string;
  wrong: number;
}

export type ServerMessage =
  | ({ t: "snapshot" } & Snapshot)
  | { t: "error"; msg: string };

export class ProtocolError extends Error {}

function fail(reason: string): never {
  throw new ProtocolError(reason);
}

export function validateSnapshot(msg: Record<string, unknown>): Snapshot {
  const { tick, lcd, lock, alarm, mode, wrong } = msg;
  if (typeof tick !== "number" || !Number.isInteger(tick) || tick < 0) {
    fail("snapshot.tick must be a non-negative integer");
  }
  if (
    !Array.isArray(lcd) ||
    lcd.length !== LCD_ROWS ||
    !lcd.every((line) => typeof line === "string" && line.length === LCD_COLS)
  ) {
    fail(`snapshot.lcd must be ${LCD_ROWS} strings of ${LCD_COLS} characters`);
  }
  if (typeof lock !== "boolean") fail("snapshot.lock must be a boolean");
  if (typeof alarm !== "boolean") fail("snapshot.alarm must be a boolean");
  if (typeof mode !== "string" || mode.length === 0) fail("snapshot.mode must be a string");
  if (typeof wrong !== "number" || !Number.isInteger(wrong) || wrong < 0) {
    fail("snapshot.wrong must be a non-negative integer");
  }
  return {
    tick,
    lcd: [lcd[0] as string, lcd[1] as string],
    lock,
    alarm,
    mode,
    wrong,
  };
}

export function parseServerMessage(raw: string): ServerMessage {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    fail(`not JSON: ${raw.slice(0, 80)}`);
  }
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    fail("message must be a JSON object");
  }
  const msg = data as Record<string, unknown>;
  if (msg.t === "error") {
    if (typeof msg.msg !== "string") fail("error message needs a msg string");
    return { t: "error", msg: msg.msg };
  }
  if (msg.t === "snapshot") {
    return { t: "snapshot", ...validateSnapshot(msg) };
  }
  fail(`unknown message type: ${String(msg.t)}`);
}

export const clientMessage = {
  subscribe(): string {
    return JSON.stringify({ t: "subscribe" });
  },
  keyDown(key: KeySymbol): string {
    return JSON.stringify({ t: "key_down", key });
  },
  keyUp(key: KeySymbol): string {
    return JSON.stringify({ t: "key_up", key });
  },
  adminReset(): string {
    return JSON.stringify({ t: "admin_reset" });
  },
};
