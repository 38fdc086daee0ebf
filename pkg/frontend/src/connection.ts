import type { ConnectionStatus } from "./state.js";

/** The slice of the WebSocket API the connection needs (injectable for tests).
 * Event params are `any` so both DOM and ws-package sockets assign cleanly. */
export interface SocketLike {
  onopen: ((ev: any) => void) | null;
  onclose: ((ev: any) => void) | null;
  onerror: ((ev: any) => void) | null;
  onmessage: ((ev: any) => void) | null;
  send(data: string): void;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ConnectionHandlers {
  onText(text: string): void;
  onStatus(status: ConnectionStatus): void;
}

/**
 * WebSocket wrapper with automatic retry. Any close or failure while
 * started flips the status to "retrying" (the UI shows a banner) and a
 * fresh socket is attempted after `retryDelayMs`; `stop()` ends that.
 */
export class TourConnection {
  private socket: SocketLike | null = null;
  private stopped = true;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly url: string,
    private readonly handlers: ConnectionHandlers,
    private readonly factory: SocketFactory,
    private readonly retryDelayMs = 1500,
  ) {}

  start(): void {
    this.stopped = false;
    this.open();
  }

  stop(): void {
    this.stopped = true;
    if (this.retryTimer !== null) clearTimeout(this.retryTimer);
    this.retryTimer = null;
    const socket = this.socket;
    this.socket = null;
    if (socket) {
      socket.onclose = null;
      socket.onerror = null;
      socket.close();
    }
    this.handlers.onStatus("closed");
  }

  /** Send a prebuilt JSON text message; false when not connected. */
  send(text: string): boolean {
    if (!this.socket) return false;
    try {
      this.socket.send(text);
      return true;
    } catch {
      return false;
    }
  }

  get connected(): boolean {
    return this.socket !== null;
  }

  private open(): void {
    this.handlers.onStatus("connecting");
    let socket: SocketLike;
    try {
      socket = this.factory(this.url);
    } catch {
      this.scheduleRetry();
      return;
    }
    socket.onopen = () => {
      if (this.socket === socket) this.handlers.onStatus("open");
    };
    socket.onmessage = (ev: { data: unknown }) => {
      if (this.socket === socket && typeof ev.data === "string") {
        this.handlers.onText(ev.data);
      }
    };
    socket.onerror = () => {
      // onclose follows; retry handled there
    };
    socket.onclose = () => {
      if (this.socket === socket) {
        this.socket = null;
        this.scheduleRetry();
      }
    };
    this.socket = socket;
  }

  private scheduleRetry(): void {
    if (this.stopped) return;
    this.handlers.onStatus("retrying");
    this.retryTimer = setTimeout(() => {
      this.retryTimer = null;
      if (!this.stopped) this.open();
    }, this.retryDelayMs);
  }
}
