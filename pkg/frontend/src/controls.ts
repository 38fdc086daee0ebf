import type { ParamField, WireParams } from "./protocol.js";
import { validateParamValue } from "./protocol.js";
import { PALETTE } from "./render.js";
import type { ConnectionStatus } from "./state.js";

export interface ControlCallbacks {
  onParamChange(field: ParamField, value: number): void;
  onPlayPause(play: boolean): void;
  onRate(fps: number): void;
  onReseed(seed: number): void;
}

const PARAM_FIELDS: { field: ParamField; label: string; step: string }[] = [
  { field: "gamma", label: "gamma (tuning)", step: "0.1" },
  { field: "R", label: "R (trim radius)", step: "0.05" },
  { field: "half_range", label: "half-range (canvas scale)", step: "0.05" },
];

/**
 * Parameter entries, playback controls, legend, and the status banner.
 * Inputs are server-authoritative: they snap to whatever the server
 * echoes on each frame, except while the user is mid-edit. Nonpositive
 * entries show an inline error and never reach the wire.
 */
export class ControlPanel {
  private inputs = new Map<ParamField, HTMLInputElement>();
  private errors = new Map<ParamField, HTMLElement>();
  private playButton: HTMLButtonElement;
  private fpsSlider: HTMLInputElement;
  private fpsReadout: HTMLElement;
  private statusBanner: HTMLElement;
  private legendBox: HTMLElement;
  private infoBox: HTMLElement;
  private playing = true;

  constructor(root: HTMLElement, private readonly cb: ControlCallbacks) {
    this.statusBanner = el("div", "status-banner");
    root.appendChild(this.statusBanner);

    const paramBox = el("div", "param-box");
    for (const { field, label, step } of PARAM_FIELDS) {
      const row = el("div", "param-row");
      const caption = el("label");
      caption.textContent = label;
      const input = document.createElement("input");
      input.type = "number";
      input.step = step;
      input.min = "0";
      const error = el("div", "inline-error");
      input.addEventListener("change", () => {
        const checked = validateParamValue(field, Number(input.value));
        if (!checked.ok) {
          error.textContent = checked.message;
          return;
        }
        error.textContent = "";
        this.cb.onParamChange(field, checked.value);
      });
      row.append(caption, input, error);
      paramBox.appendChild(row);
      this.inputs.set(field, input);
      this.errors.set(field, error);
    }
    root.appendChild(paramBox);

    const playbackBox = el("div", "playback-box");
    this.playButton = document.createElement("button");
    this.playButton.textContent = "pause";
    this.playButton.addEventListener("click", () => this.cb.onPlayPause(!this.playing));
    const reseed = document.createElement("button");
    reseed.textContent = "reseed";
    reseed.addEventListener("click", () =>
      this.cb.onReseed(Math.floor(Math.random() * 2 ** 31)),
    );
    this.fpsSlider = document.createElement("input");
    this.fpsSlider.type = "range";
    this.fpsSlider.min = "1";
    this.fpsSlider.max = "120";
    this.fpsSlider.value = "25";
    this.fpsReadout = el("span", "fps-readout");
    this.fpsSlider.addEventListener("change", () => this.cb.onRate(Number(this.fpsSlider.value)));
    playbackBox.append(this.playButton, reseed, this.fpsSlider, this.fpsReadout);
    root.appendChild(playbackBox);

    this.legendBox = el("div", "legend");
    root.appendChild(this.legendBox);
    this.infoBox = el("div", "info");
    root.appendChild(this.infoBox);
  }

  /** Snap inputs to the server echo (skipping whichever one is mid-edit). */
  syncParams(params: WireParams): void {
    for (const [field, input] of this.inputs) {
      if (document.activeElement === input) continue;
      const value = params[field];
      if (value !== undefined) input.value = trim(value);
    }
    const inverted = params.focus_inverted ? " (inverted: p_eff < 2)" : "";
    this.infoBox.textContent = `p_eff = ${trim(params.p_eff ?? NaN)}${inverted}`;
  }

  syncPlayback(playing: boolean, fps: number): void {
    this.playing = playing;
    this.playButton.textContent = playing ? "pause" : "play";
    if (document.activeElement !== this.fpsSlider) this.fpsSlider.value = String(fps);
    this.fpsReadout.textContent = `${trim(fps)} fps`;
  }

  showServerError(reason: string, field?: string): void {
    const slot = field && this.errors.get(field as ParamField);
    if (slot) {
      slot.textContent = reason;
    } else {
      this.statusBanner.textContent = `server: ${reason}`;
    }
  }

  setStatus(status: ConnectionStatus, url: string): void {
    this.statusBanner.dataset.status = status;
    this.statusBanner.textContent =
      status === "open"
        ? `connected to ${url}`
        : status === "retrying"
          ? `connection lost, retrying ${url} ...`
          : status === "connecting"
            ? `connecting to ${url} ...`
            : "disconnected";
  }

  renderLegend(labels: string[]): void {
    this.legendBox.replaceChildren();
    labels.forEach((label, i) => {
      const entry = el("div", "legend-entry");
      const swatch = el("span", "legend-swatch");
      swatch.style.backgroundColor = PALETTE[i % PALETTE.length];
      const name = el("span");
      name.textContent = label;
      entry.append(swatch, name);
      this.legendBox.appendChild(entry);
    });
  }
}

function el(tag: string, className?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  return node;
}

function trim(value: number): string {
  return Number.isFinite(value) ? String(Math.round(value * 1000) / 1000) : "?";
}
