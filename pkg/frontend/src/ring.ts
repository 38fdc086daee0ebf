import type { FramePayload } from "./protocol.js";

/**
 * Small FIFO ring decoupling network receipt from the render loop.
 * When the producer bursts past the capacity the oldest frames are
 * dropped (counted), so the display stays at most `capacity` frames
 * behind the wire and never reorders.
 */
export class FrameRing {
  private frames: FramePayload[] = [];
  dropped = 0;

  constructor(readonly capacity = 4) {
    if (capacity < 1) throw new Error("capacity must be >= 1");
  }

  get size(): number {
    return this.frames.length;
  }

  push(frame: FramePayload): void {
    if (this.frames.length >= this.capacity) {
      this.frames.shift();
      this.dropped += 1;
    }
    this.frames.push(frame);
  }

  /** Oldest buffered frame, or null when the ring is empty. */
  shift(): FramePayload | null {
    return this.frames.shift() ?? null;
  }

  clear(): void {
    this.frames.length = 0;
  }
}
