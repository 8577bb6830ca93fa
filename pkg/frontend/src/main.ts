/**
 * Browser entry point: palette, paintable grid canvas, ranked results.
 *
 * The canvas paints grid cells directly at the store's resolution (from
 * GET /api/info), rendered at an integer zoom factor, so the submitted
 * cells are exactly the cells on screen.
 */

import { fetchInfo, fetchPalette, submitSketch, PaletteEntry, RankedResult } from "./api.js";
import { cellColors, cssColor } from "./render.js";
import {
  BACKGROUND,
  CanvasState,
  clear,
  createState,
  paint,
  withActiveConcept,
  withBrushRadius,
} from "./state.js";

const SERVER = "";
const CANVAS_TARGET_PX = 640;

const app = document.querySelector<HTMLDivElement>("#app");
if (!app) {
  throw new Error("missing #app container");
}

app.innerHTML = `
  <h1>semsketch</h1>
  <p id="status">loading palette…</p>
  <div id="workspace" hidden>
    <div id="palette"></div>
    <div id="canvas-column">
      <canvas id="sketch"></canvas>
      <div id="controls">
        <label>brush <input id="brush" type="range" min="0" max="4" value="1"></label>
        <label>k <input id="k" type="number" min="1" value="10"></label>
        <button id="clear">clear</button>
        <button id="submit">search</button>
      </div>
    </div>
    <ol id="results"></ol>
  </div>
`;

const statusLine = document.querySelector<HTMLParagraphElement>("#status")!;
const workspace = document.querySelector<HTMLDivElement>("#workspace")!;
const paletteBox = document.querySelector<HTMLDivElement>("#palette")!;
const canvas = document.querySelector<HTMLCanvasElement>("#sketch")!;
const brushInput = document.querySelector<HTMLInputElement>("#brush")!;
const kInput = document.querySelector<HTMLInputElement>("#k")!;
const clearButton = document.querySelector<HTMLButtonElement>("#clear")!;
const submitButton = document.querySelector<HTMLButtonElement>("#submit")!;
const resultsList = document.querySelector<HTMLOListElement>("#results")!;

let state: CanvasState = createState(32);
let palette: PaletteEntry[] = [];
let cellPx = 20;
let querySequence = 0; // a newer submit invalidates older responses

function redraw(): void {
  const context = canvas.getContext("2d");
  if (!context) return;
  const colors = cellColors(state.cells, palette);
  for (let r = 0; r < state.n; r++) {
    for (let c = 0; c < state.n; c++) {
      context.fillStyle = colors[r * state.n + c] ?? "rgb(0, 0, 0)";
      context.fillRect(c * cellPx, r * cellPx, cellPx, cellPx);
    }
  }
}

function renderPalette(): void {
  paletteBox.innerHTML = "";
  for (const entry of palette) {
    const swatch = document.createElement("button");
    swatch.className = "swatch";
    swatch.style.background = cssColor(entry.color);
    swatch.textContent = entry.id === BACKGROUND ? `${entry.label} (erase)` : entry.label;
    swatch.onclick = () => {
      state = withActiveConcept(state, entry.id);
      for (const other of paletteBox.children) other.classList.remove("active");
      swatch.classList.add("active");
    };
    paletteBox.append(swatch);
  }
}

function renderResults(results: RankedResult[]): void {
  resultsList.innerHTML = "";
  for (const item of results) {
    const row = document.createElement("li");
    row.textContent = `segment ${item.segment_id} — distance ${item.distance.toFixed(4)}`;
    resultsList.append(row);
  }
}

function cellAt(event: PointerEvent): { row: number; col: number } {
  const rect = canvas.getBoundingClientRect();
  return {
    row: Math.floor((event.clientY - rect.top) / cellPx),
    col: Math.floor((event.clientX - rect.left) / cellPx),
  };
}

let pointerDown = false;
canvas.addEventListener("pointerdown", (event) => {
  pointerDown = true;
  canvas.setPointerCapture(event.pointerId);
  const { row, col } = cellAt(event);
  state = paint(state, row, col, state.activeConcept);
  redraw();
});
canvas.addEventListener("pointermove", (event) => {
  if (!pointerDown) return;
  const { row, col } = cellAt(event);
  state = paint(state, row, col, state.activeConcept);
  redraw();
});
canvas.addEventListener("pointerup", () => {
  pointerDown = false;
});

brushInput.oninput = () => {
  state = withBrushRadius(state, Number(brushInput.value));
};
clearButton.onclick = () => {
  state = clear(state);
  redraw();
};

submitButton.onclick = async () => {
  const k = Number(kInput.value);
  if (!Number.isInteger(k) || k < 1) {
    statusLine.textContent = "k must be a positive integer";
    return;
  }
  const ticket = ++querySequence;
  statusLine.textContent = "searching…";
  try {
    const results = await submitSketch(SERVER, state, k);
    if (ticket !== querySequence) return; // a newer query superseded this one
    statusLine.textContent = `${results.length} results`;
    renderResults(results);
  } catch (error) {
    if (ticket !== querySequence) return;
    statusLine.textContent = `query failed: ${(error as Error).message}`;
  }
};

async function boot(): Promise<void> {
  statusLine.textContent = "loading palette…";
  submitButton.disabled = true;
  try {
    const info = await fetchInfo(SERVER);
    palette = await fetchPalette(SERVER);
    state = withBrushRadius(createState(info.n), Number(brushInput.value));
    cellPx = Math.max(4, Math.floor(CANVAS_TARGET_PX / info.n));
    canvas.width = canvas.height = cellPx * info.n;
    renderPalette();
    redraw();
    workspace.hidden = false;
    submitButton.disabled = false;
    statusLine.textContent =
      `${palette.length} concepts, ${info.count} segments, grid ${info.n}×${info.n}`;
  } catch (error) {
    statusLine.textContent = `cannot reach the service: ${(error as Error).message} `;
    const retry = document.createElement("button");
    retry.textContent = "retry";
    retry.onclick = () => void boot();
    statusLine.append(retry);
  }
}

void boot();
