import type {
  FramePayload,
  HelloPayload,
  ServerMessage,
  WireParams,
} from "./protocol.js";
import { parseServerMessage } from "./protocol.js";
import { FrameRing } from "./ring.js";

export type ConnectionStatus = "connecting" | "open" | "retrying" | "closed";

export interface FrameStats {
  received: number;
  stale: number;
  ignored: number;
}

/**
 * Session state driven purely by server messages. The controls render
 * from `params`, which only ever holds what the server last echoed
 * (hello, then each frame) — no optimistic local values, so the UI can
 * never show a transform setting the server is not actually applying.
 */
export class ViewerStore {
  status: ConnectionStatus = "connecting";
  hello: HelloPayload | null = null;
  params: WireParams | null = null;
  playing = true;
  fps = 25;
  lastFrameIndex = -1;
  lastError: { reason: string; field?: string } | null = null;
  readonly ring: FrameRing;
  readonly stats: FrameStats = { received: 0, stale: 0, ignored: 0 };

  constructor(ringCapacity = 4) {
    this.ring = new FrameRing(ringCapacity);
  }

  /** Feed one raw text message; returns the parsed message if it was used. */
  ingest(text: string): ServerMessage | null {
    const msg = parseServerMessage(text);
    if (msg === null) {
      this.stats.ignored += 1;
      return null;
    }
    this.apply(msg);
    return msg;
  }

  apply(msg: ServerMessage): void {
    switch (msg.type) {
      case "hello":
        this.hello = msg.payload;
        this.params = msg.payload.params;
        this.fps = msg.payload.fps;
        this.playing = true;
        this.lastFrameIndex = -1;
        this.ring.clear();
        break;
      case "frame":
        this.acceptFrame(msg.payload);
        break;
      case "playback":
        this.playing = msg.payload.playing;
        this.fps = msg.payload.fps;
        break;
      case "error":
        this.lastError = msg.payload;
        break;
    }
  }

  private acceptFrame(frame: FramePayload): void {
    this.stats.received += 1;
    if (frame.frame_index <= this.lastFrameIndex) {
      this.stats.stale += 1; // dropped, never rendered out of order
      return;
    }
    this.lastFrameIndex = frame.frame_index;
    this.params = frame.params; // server echo is authoritative
    this.lastError = null;
    this.ring.push(frame);
  }

  setStatus(status: ConnectionStatus): void {
    this.status = status;
    if (status !== "open") this.ring.clear();
  }

  /** Distinct labels in first-seen order, for the legend. */
  distinctLabels(): string[] {
    if (!this.hello?.labels) return [];
    const seen = new Set<string>();
    const out: string[] = [];
    for (const label of this.hello.labels) {
      if (!seen.has(label)) {
        seen.add(label);
        out.push(label);
      }
    }
    return out;
  }
}
