/**
 * Wire protocol spoken with the tour server: single JSON text messages
 * shaped {"type": t, "payload": {...}}. The viewer ignores unknown
 * message types and unknown payload fields; malformed messages are
 * skipped (parse returns null) rather than crashing the session.
 */

export interface WireParams {
  gamma: number;
  R: number;
  half_range: number;
  p_eff?: number;
  focus_inverted?: boolean;
}

export interface HelloPayload {
  n: number;
  p: number;
  column_names: string[];
  labels: string[] | null;
  params: WireParams;
  seed: number;
  fps: number;
}

export interface FramePayload {
  frame_index: number;
  basis: number[][];
  points: number[][];
  params: WireParams;
}

export interface PlaybackPayload {
  playing: boolean;
  fps: number;
  next_frame_index: number;
}

export interface ErrorPayload {
  reason: string;
  field?: string;
}

export type ServerMessage =
  | { type: "hello"; payload: HelloPayload }
  | { type: "frame"; payload: FramePayload }
  | { type: "playback"; payload: PlaybackPayload }
  | { type: "error"; payload: ErrorPayload };

export type ParamField = "gamma" | "R" | "half_range";

const PARAM_FIELDS: ParamField[] = ["gamma", "R", "half_range"];

function isRecord(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function isFiniteNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

function isParams(v: unknown): v is WireParams {
  return isRecord(v) && PARAM_FIELDS.every((f) => isFiniteNumber(v[f]));
}

function isPairMatrix(v: unknown): v is number[][] {
  return Array.isArray(v) && v.every((row) => Array.isArray(row) && row.length === 2);
}

/**
 * Parse one incoming text message. Returns a typed message for the four
 * server kinds, or null for anything unparseable or unknown (the caller
 * logs and moves on).
 */
export function parseServerMessage(text: string): ServerMessage | null {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    return null;
  }
  if (!isRecord(raw) || typeof raw.type !== "string") return null;
  const payload = raw.payload;
  if (!isRecord(payload)) return null;
  switch (raw.type) {
    case "hello":
      if (
        isFiniteNumber(payload.n) &&
        isFiniteNumber(payload.p) &&
        Array.isArray(payload.column_names) &&
        isParams(payload.params)
      ) {
        return {
          type: "hello",
          payload: {
            n: payload.n,
            p: payload.p,
            column_names: payload.column_names.map(String),
            labels: Array.isArray(payload.labels) ? payload.labels.map(String) : null,
            params: payload.params,
            seed: isFiniteNumber(payload.seed) ? payload.seed : 0,
            fps: isFiniteNumber(payload.fps) ? payload.fps : 25,
          },
        };
      }
      return null;
    case "frame":
      if (
        isFiniteNumber(payload.frame_index) &&
        isPairMatrix(payload.basis) &&
        isPairMatrix(payload.points) &&
        isParams(payload.params)
      ) {
        return {
          type: "frame",
          payload: {
            frame_index: payload.frame_index,
            basis: payload.basis,
            points: payload.points,
            params: payload.params,
          },
        };
      }
      return null;
    case "playback":
      if (typeof payload.playing === "boolean" && isFiniteNumber(payload.fps)) {
        return {
          type: "playback",
          payload: {
            playing: payload.playing,
            fps: payload.fps,
            next_frame_index: isFiniteNumber(payload.next_frame_index)
              ? payload.next_frame_index
              : -1,
          },
        };
      }
      return null;
    case "error":
      if (typeof payload.reason === "string") {
        return {
          type: "error",
          payload: {
            reason: payload.reason,
            field: typeof payload.field === "string" ? payload.field : undefined,
          },
        };
      }
      return null;
    default:
      return null; // unknown types are ignored by contract
  }
}

/** Validate a slider/entry value before anything is sent to the server. */
export function validateParamValue(
  field: ParamField,
  raw: number,
): { ok: true; value: number } | { ok: false; message: string } {
  if (!Number.isFinite(raw)) {
    return { ok: false, message: `${field} must be a number` };
  }
  if (raw <= 0) {
    return { ok: false, message: `${field} must be positive` };
  }
  return { ok: true, value: raw };
}

export function buildSetParams(patch: Partial<Record<ParamField, number>>): string {
  return JSON.stringify({ type: "set_params", payload: patch });
}

export function buildPlayback(action: "play" | "pause"): string;
export function buildPlayback(action: "rate", fps: number): string;
export function buildPlayback(action: "play" | "pause" | "rate", fps?: number): string {
  const payload: Record<string, unknown> = { action };
  if (action === "rate") payload.fps = fps;
  return JSON.stringify({ type: "playback", payload });
}

export function buildReseed(seed: number): string {
  return JSON.stringify({ type: "reseed", payload: { seed } });
}
