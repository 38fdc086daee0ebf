import { TourConnection } from "./connection.js";
import { ControlPanel } from "./controls.js";
import { buildPlayback, buildReseed, buildSetParams } from "./protocol.js";
import { CanvasScatter, colorIndices } from "./render.js";
import { ViewerStore } from "./state.js";

function defaultUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("ws");
  if (fromQuery) return fromQuery;
  const host = window.location.hostname || "127.0.0.1";
  return `ws://${host}:8765/tour`;
}

function start(): void {
  const canvas = document.getElementById("scatter") as HTMLCanvasElement;
  const panelRoot = document.getElementById("panel") as HTMLElement;
  const urlInput = document.getElementById("ws-url") as HTMLInputElement;
  const connectButton = document.getElementById("connect") as HTMLButtonElement;
  const meter = document.getElementById("meter") as HTMLElement;

  const store = new ViewerStore();
  const scatter = new CanvasScatter(canvas);
  let colors: Int32Array | null = null;
  let connection: TourConnection | null = null;

  const panel = new ControlPanel(panelRoot, {
    onParamChange: (field, value) => connection?.send(buildSetParams({ [field]: value })),
    onPlayPause: (play) => connection?.send(buildPlayback(play ? "play" : "pause")),
    onRate: (fps) => connection?.send(buildPlayback("rate", fps)),
    onReseed: (seed) => connection?.send(buildReseed(seed)),
  });

  urlInput.value = defaultUrl();

  const connect = () => {
    connection?.stop();
    const url = urlInput.value;
    connection = new TourConnection(
      url,
      {
        onText: (text) => {
          const msg = store.ingest(text);
          if (!msg) return;
          if (msg.type === "hello") {
            colors = colorIndices(msg.payload.labels, msg.payload.n);
            panel.renderLegend(store.distinctLabels());
            panel.syncParams(msg.payload.params);
            panel.syncPlayback(store.playing, store.fps);
          } else if (msg.type === "playback") {
            panel.syncPlayback(store.playing, store.fps);
          } else if (msg.type === "error") {
            panel.showServerError(msg.payload.reason, msg.payload.field);
          }
        },
        onStatus: (status) => {
          store.setStatus(status);
          panel.setStatus(status, url);
        },
      },
      (u) => new WebSocket(u),
    );
    connection.start();
  };
  connectButton.addEventListener("click", connect);
  connect();

  // Render loop: one buffered frame per animation tick, newest params win.
  let renderedFrames = 0;
  let meterStamp = performance.now();
  const tick = () => {
    const frame = store.ring.shift();
    if (frame) {
      scatter.render(frame.points, colors);
      panel.syncParams(frame.params);
      renderedFrames += 1;
      const now = performance.now();
      if (now - meterStamp > 1000) {
        const fps = (renderedFrames * 1000) / (now - meterStamp);
        meter.textContent =
          `frame ${frame.frame_index} | ${fps.toFixed(1)} fps drawn | ` +
          `${store.stats.stale} stale, ${store.ring.dropped} ring-dropped`;
        renderedFrames = 0;
        meterStamp = now;
      }
    }
    requestAnimationFrame(tick);
  };
  requestAnimationFrame(tick);
}

window.addEventListener("DOMContentLoaded", start);
