/**
 * Canvas scatter renderer. Data space is the square [-1, 1]^2 with a
 * guide circle at radius 0.9 (the trim radius maps there). Points are
 * rasterized as 2x2 pixel blocks straight into an ImageData buffer,
 * which sustains 100k+ points per frame; the guide circle and any text
 * stay vector via the 2D context on top.
 *
 * `rasterize` is pure (typed arrays in, pixels out) so the hot path is
 * testable and benchmarkable off-browser.
 */

export const GUIDE_RADIUS = 0.9;

/** Categorical palette, same ordering the exporter uses. */
export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export const BACKGROUND = "#111318";

/** Hex color to the little-endian ABGR word ImageData buffers want. */
export function hexToAbgr(hex: string, alpha = 255): number {
  const r = parseInt(hex.slice(1, 3), 16);
  const g = parseInt(hex.slice(3, 5), 16);
  const b = parseInt(hex.slice(5, 7), 16);
  return ((alpha << 24) | (b << 16) | (g << 8) | r) >>> 0;
}

export function paletteAbgr(colors: string[] = PALETTE): Uint32Array {
  return Uint32Array.from(colors, (c) => hexToAbgr(c));
}

/** Map a data coordinate in [-1, 1]^2 to pixel coordinates (y flipped). */
export function dataToPixel(x: number, y: number, size: number): [number, number] {
  return [
    Math.round(((x + 1) / 2) * (size - 1)),
    Math.round(((1 - y) / 2) * (size - 1)),
  ];
}

/** Per-point palette indices from categorical labels, first-seen order. */
export function colorIndices(labels: string[] | null, n: number): Int32Array {
  const idx = new Int32Array(n);
  if (!labels) return idx;
  const assigned = new Map<string, number>();
  for (let i = 0; i < n && i < labels.length; i++) {
    let c = assigned.get(labels[i]);
    if (c === undefined) {
      c = assigned.size % PALETTE.length;
      assigned.set(labels[i], c);
    }
    idx[i] = c;
  }
  return idx;
}

/**
 * Draw points as 2x2 blocks into `pixels` (length size*size, ABGR).
 * Returns how many points landed inside the canvas. Points beyond
 * [-1, 1] (possible when half_range is set below R) are clipped.
 */
export function rasterize(
  points: number[][],
  colors: Int32Array | null,
  palette: Uint32Array,
  size: number,
  pixels: Uint32Array,
  background: number,
): number {
  pixels.fill(background);
  const scale = (size - 1) / 2;
  let drawn = 0;
  for (let i = 0; i < points.length; i++) {
    const px = Math.round((points[i][0] + 1) * scale);
    const py = Math.round((1 - points[i][1]) * scale);
    if (px < 0 || py < 0 || px >= size - 1 || py >= size - 1) continue;
    const color = palette[colors === null ? 0 : colors[i]];
    const base = py * size + px;
    pixels[base] = color;
    pixels[base + 1] = color;
    pixels[base + size] = color;
    pixels[base + size + 1] = color;
    drawn++;
  }
  return drawn;
}

/** Canvas wrapper: rasterized points underneath, vector guide circle on top. */
export class CanvasScatter {
  private readonly ctx: CanvasRenderingContext2D;
  private readonly image: ImageData;
  private readonly pixels: Uint32Array;
  private readonly palette: Uint32Array;
  private readonly backgroundWord: number;

  constructor(private readonly canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("2D canvas context unavailable");
    this.ctx = ctx;
    this.image = ctx.createImageData(canvas.width, canvas.height);
    this.pixels = new Uint32Array(this.image.data.buffer);
    this.palette = paletteAbgr();
    this.backgroundWord = hexToAbgr(BACKGROUND);
  }

  render(points: number[][], colors: Int32Array | null): number {
    const size = this.canvas.width;
    const drawn = rasterize(points, colors, this.palette, size, this.pixels, this.backgroundWord);
    this.ctx.putImageData(this.image, 0, 0);
    this.drawGuideCircle(size);
    return drawn;
  }

  private drawGuideCircle(size: number): void {
    const ctx = this.ctx;
    ctx.save();
    ctx.strokeStyle = "#8a8f98";
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.arc(size / 2, size / 2, (GUIDE_RADIUS * (size - 1)) / 2, 0, 2 * Math.PI);
    ctx.stroke();
    ctx.restore();
  }
}
