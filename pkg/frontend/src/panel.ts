/**
 * DOM front panel: a 2x16 character LCD grid, the 4x3 keypad, lock and
 * alarm lamps, and a two-step admin reset button. Pointer down/up map to
 * key_down/key_up so the simulator's debounce sees honest hold times.
 */

import { KEY_ROWS, LCD_COLS, LCD_ROWS, type KeySymbol } from "./protocol.js";
import type { PanelView } from "./viewmodel.js";

export interface PanelCallbacks {
  onKeyDown(key: KeySymbol): void;
  onKeyUp(key: KeySymbol): void;
  onAdminReset(): void;
}

const RESET_CONFIRM_MS = 3000;

export class PanelDom {
  readonly root: HTMLElement;
  private readonly cells: HTMLElement[][] = [];
  private readonly lockLamp: HTMLElement;
  private readonly lockText: HTMLElement;
  private readonly alarmLamp: HTMLElement;
  private readonly modeText: HTMLElement;
  private readonly statusBar: HTMLElement;
  private readonly resetButton: HTMLButtonElement;
  private resetArmed = false;
  private resetTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(private readonly callbacks: PanelCallbacks) {
    this.root = el("div", "panel");

    const lcd = el("div", "lcd");
    for (let row = 0; row < LCD_ROWS; row += 1) {
      const rowEl = el("div", "lcd-row");
      const rowCells: HTMLElement[] = [];
      for (let col = 0; col < LCD_COLS; col += 1) {
        const cell = el("span", "lcd-cell");
        cell.textContent = " ";
        rowEl.append(cell);
        rowCells.push(cell);
      }
      lcd.append(rowEl);
      this.cells.push(rowCells);
    }
    this.root.append(lcd);

    const lamps = el("div", "lamps");
    this.lockLamp = el("span", "lamp lamp-locked");
    this.lockText = el("span", "lamp-label");
    this.lockText.textContent = "LOCKED";
    this.alarmLamp = el("span", "lamp lamp-quiet");
    const alarmText = el("span", "lamp-label");
    alarmText.textContent = "ALARM";
    this.modeText = el("span", "mode-label");
    lamps.append(this.lockLamp, this.lockText, this.alarmLamp, alarmText, this.modeText);
    this.root.append(lamps);

    const keypad = el("div", "keypad");
    for (const rowKeys of KEY_ROWS) {
      const rowEl = el("div", "keypad-row");
      for (const key of rowKeys) {
        rowEl.append(this.makeKey(key));
      }
      keypad.append(rowEl);
    }
    this.root.append(keypad);

    this.resetButton = document.createElement("button");
    this.resetButton.className = "reset-button";
    this.resetButton.textContent = "Admin reset";
    this.resetButton.addEventListener("click", () => this.handleResetClick());
    this.root.append(this.resetButton);

    this.statusBar = el("div", "status-bar");
    this.root.append(this.statusBar);
  }

  private makeKey(key: KeySymbol): HTMLButtonElement {
    const button = document.createElement("button");
    button.className = "key";
    button.textContent = key;
    let held = false;
    const down = () => {
      if (!held) {
        held = true;
        button.classList.add("key-held");
        this.callbacks.onKeyDown(key);
      }
    };
    const up = () => {
      if (held) {
        held = false;
        button.classList.remove("key-held");
        this.callbacks.onKeyUp(key);
      }
    };
    button.addEventListener("pointerdown", down);
    button.addEventListener("pointerup", up);
    button.addEventListener("pointerleave", up);
    button.addEventListener("pointercancel", up);
    return button;
  }

  private handleResetClick(): void {
    if (!this.resetArmed) {
      this.resetArmed = true;
      this.resetButton.textContent = "Confirm reset?";
      this.resetButton.classList.add("reset-armed");
      this.resetTimer = setTimeout(() => this.disarmReset(), RESET_CONFIRM_MS);
      return;
    }
    this.disarmReset();
    this.callbacks.onAdminReset();
  }

  private disarmReset(): void {
    if (this.resetTimer !== null) {
      clearTimeout(this.resetTimer);
      this.resetTimer = null;
    }
    this.resetArmed = false;
    this.resetButton.textContent = "Admin reset";
    this.resetButton.classList.remove("reset-armed");
  }

  render(view: PanelView): void {
    for (let row = 0; row < LCD_ROWS; row += 1) {
      for (let col = 0; col < LCD_COLS; col += 1) {
        const ch = view.cells[row]?.[col] ?? " ";
        // NBSP keeps blank cells from collapsing in the grid
        this.cells[row]![col]!.textContent = ch === " " ? " " : ch;
      }
    }
    this.lockLamp.className = `lamp ${view.lockClass}`;
    this.lockText.textContent = view.lockLabel;
    this.alarmLamp.className = view.alarmOn ? "lamp lamp-alarm" : "lamp lamp-quiet";
    this.modeText.textContent = `${view.mode} (wrong: ${view.wrong})`;
  }

  setConnected(connected: boolean): void {
    this.root.classList.toggle("disconnected", !connected);
  }

  setStatus(text: string, kind: "ok" | "err"): void {
    this.statusBar.textContent = text;
    this.statusBar.className = `status-bar status-${kind}`;
  }
}

function el(tag: string, className: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  return node;
}
