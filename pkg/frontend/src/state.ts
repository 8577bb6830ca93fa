/**
 * Sketch canvas state and the pure transitions on it.
 *
 * The grid mirrors the server's query resolution exactly: n*n concept ids in
 * row-major order, with 0 (background) as the erase value. Painting with the
 * background concept therefore *is* erasing, which makes erase the inverse
 * of paint over the same stroke.
 */

export interface CanvasState {
  readonly n: number;
  /** Row-major cell ids, length n*n; 0 = background. */
  readonly cells: ReadonlyArray<number>;
  readonly activeConcept: number;
  /** Chebyshev radius of the brush, in cells; 0 paints a single cell. */
  readonly brushRadius: number;
}

export const BACKGROUND = 0;

export function createState(n: number): CanvasState {
  if (!Number.isInteger(n) || n < 1) {
    throw new Error(`grid side must be a positive integer, got ${n}`);
  }
  return { n, cells: new Array(n * n).fill(BACKGROUND), activeConcept: BACKGROUND, brushRadius: 0 };
}

export function withActiveConcept(state: CanvasState, concept: number): CanvasState {
  return { ...state, activeConcept: concept };
}

export function withBrushRadius(state: CanvasState, radius: number): CanvasState {
  return { ...state, brushRadius: Math.max(0, Math.floor(radius)) };
}

/**
 * Paint `concept` onto every cell within the brush radius of (row, col).
 * Out-of-range parts of the stroke are clipped; the input state is never
 * mutated.
 */
export function paint(state: CanvasState, row: number, col: number, concept: number): CanvasState {
  const { n, brushRadius } = state;
  const next = state.cells.slice();
  const rLo = Math.max(0, row - brushRadius);
  const rHi = Math.min(n - 1, row + brushRadius);
  const cLo = Math.max(0, col - brushRadius);
  const cHi = Math.min(n - 1, col + brushRadius);
  for (let r = rLo; r <= rHi; r++) {
    for (let c = cLo; c <= cHi; c++) {
      next[r * n + c] = concept;
    }
  }
  return { ...state, cells: next };
}

export function clear(state: CanvasState): CanvasState {
  return { ...state, cells: new Array(state.n * state.n).fill(BACKGROUND) };
}

/**
 * The wire body for POST /api/query. Key order is fixed (n, cells, k) so
 * identical sketches always serialize to identical bytes.
 */
export function sketchRequestBody(state: CanvasState, k: number): string {
  if (!Number.isInteger(k) || k < 1) {
    throw new Error(`k must be a positive integer, got ${k}`);
  }
  return JSON.stringify({ n: state.n, cells: state.cells, k });
}

/** Full-state serialization for local persistence; inverse of deserializeState. */
export function serializeState(state: CanvasState): string {
  return JSON.stringify({
    n: state.n,
    cells: state.cells,
    activeConcept: state.activeConcept,
    brushRadius: state.brushRadius,
  });
}

export function deserializeState(payload: string): CanvasState {
  const raw: unknown = JSON.parse(payload);
  if (typeof raw !== "object" || raw === null) {
    throw new Error("sketch payload is not an object");
  }
  const obj = raw as Record<string, unknown>;
  const n = obj.n;
  const cells = obj.cells;
  const activeConcept = obj.activeConcept;
  const brushRadius = obj.brushRadius;
  if (typeof n !== "number" || !Number.isInteger(n) || n < 1) {
    throw new Error("sketch payload has an invalid grid side");
  }
  if (!Array.isArray(cells) || cells.length !== n * n || !cells.every(isCellId)) {
    throw new Error("sketch payload cells do not form an n*n id grid");
  }
  if (typeof activeConcept !== "number" || typeof brushRadius !== "number") {
    throw new Error("sketch payload is missing brush settings");
  }
  return { n, cells: cells as number[], activeConcept, brushRadius };
}

function isCellId(value: unknown): boolean {
  return typeof value === "number" && Number.isInteger(value) && value >= 0;
}
