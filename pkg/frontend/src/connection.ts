/**
 * WebSocket session with the simulator: subscribes on open, surfaces
 * snapshots and server errors, and reconnects with exponential backoff
 * when the link drops. The socket constructor is injectable so the whole
 * state machine is testable without a network.
 */

import {
  clientMessage,
  parseServerMessage,
  type KeySymbol,
  type Snapshot,
} from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "retrying" | "closed";

// handler params are `any` so the browser WebSocket (whose handlers take
// typed events with a `this` binding) is structurally assignable
export interface SocketLike {
  // eslint-disable-next-line @typescript-eslint/no-explicit-any
  onopen: ((event: any) => void) | null;
  // eslint-disable-next-line @typescript-eslint/no-explicit-any
  onclose: ((event: any) => void) | null;
  // eslint-disable-next-line @typescript-eslint/no-explicit-any
  onerror: ((event: any) => void) | null;
  // eslint-disable-next-line @typescript-eslint/no-explicit-any
  onmessage: ((event: any) => void) | null;
  send(data: string): void;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ConnectionHandlers {
  onSnapshot?: (snap: Snapshot) => void;
  onStatus?: (status: ConnectionStatus, detail: string) => void;
  onServerError?: (msg: string) => void;
}

export interface BackoffOptions {
  baseDelayMs?: number;
  maxDelayMs?: number;
}

export class PanelConnection {
  private socket: SocketLike | null = null;
  private isOpen = false;
  private stopped = false;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;
  private readonly baseDelayMs: number;
  private readonly maxDelayMs: number;
  private retryDelayMs: number;

  constructor(
    private readonly url: string,
    private readonly handlers: ConnectionHandlers,
    private readonly factory: SocketFactory,
    options: BackoffOptions = {},
  ) {
    this.baseDelayMs = options.baseDelayMs ?? 250;
    this.maxDelayMs = options.maxDelayMs ?? 5000;
    this.retryDelayMs = this.baseDelayMs;
  }

  connect(): void {
    if (this.stopped || this.socket !== null) return;
    this.emitStatus("connecting", `connecting to ${this.url}`);
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.isOpen = true;
      this.retryDelayMs = this.baseDelayMs;
      this.emitStatus("open", "connected");
      socket.send(clientMessage.subscribe());
    };
    socket.onmessage = (event: { data: unknown }) => this.handleMessage(String(event.data));
    socket.onclose = () => this.handleClose();
    socket.onerror = () => {
      // the close handler does the rework; nothing to do here
    };
  }

  close(): void {
    this.stopped = true;
    if (this.retryTimer !== null) {
      clearTimeout(this.retryTimer);
      this.retryTimer = null;
    }
    this.socket?.close();
    this.socket = null;
    this.isOpen = false;
    this.emitStatus("closed", "closed");
  }

  get open(): boolean {
    return this.isOpen;
  }

  pressKey(key: KeySymbol): void {
    this.sendWhenOpen(clientMessage.keyDown(key));
  }

  releaseKey(key: KeySymbol): void {
    this.sendWhenOpen(clientMessage.keyUp(key));
  }

  adminReset(): void {
    this.sendWhenOpen(clientMessage.adminReset());
  }

  private sendWhenOpen(data: string): void {
    if (this.isOpen && this.socket !== null) {
      this.socket.send(data);
    }
  }

  private handleMessage(raw: string): void {
    let msg;
    try {
      msg = parseServerMessage(raw);
    } catch (err) {
      // keep the previous frame; just surface the problem
      this.handlers.onServerError?.(String(err));
      return;
    }
    if (msg.t === "snapshot") {
      this.handlers.onSnapshot?.(msg);
    } else {
      this.handlers.onServerError?.(msg.msg);
    }
  }

  private handleClose(): void {
    this.socket = null;
    this.isOpen = false;
    if (this.stopped) {
      this.emitStatus("closed", "closed");
      return;
    }
    const delay = this.retryDelayMs;
    this.retryDelayMs = Math.min(this.retryDelayMs * 2, this.maxDelayMs);
    this.emitStatus("retrying", `connection lost, retrying in ${delay} ms`);
    this.retryTimer = setTimeout(() => {
      this.retryTimer = null;
      this.connect();
    }, delay);
  }

  private emitStatus(status: ConnectionStatus, detail: string): void {
    this.handlers.onStatus?.(status, detail);
  }
}
