/**
 * REST client for the retrieval service. All calls take an injectable fetch
 * so tests can run without a server; colors and ids pass through untouched.
 */

import { CanvasState, sketchRequestBody } from "./state.js";

export interface PaletteEntry {
  id: number;
  label: string;
  color: [number, number, number];
}

export interface StoreInfo {
  n: number;
  d: number;
  b: number;
  count: number;
  vocabulary_size: number;
}

export interface RankedResult {
  segment_id: number;
  distance: number;
  rank: number;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
    this.name = "ApiError";
  }
}

async function detailOf(response: Response): Promise<string> {
  try {
    const body: unknown = await response.json();
    if (typeof body === "object" && body !== null && "detail" in body) {
      return String((body as { detail: unknown }).detail);
    }
  } catch {
    // fall through to the status line
  }
  return response.statusText || `HTTP ${response.status}`;
}

export async function fetchPalette(base: string, fetchFn: FetchLike = fetch): Promise<PaletteEntry[]> {
  const response = await fetchFn(`${base}/api/concepts`);
  if (!response.ok) {
    throw new ApiError(await detailOf(response), response.status);
  }
  const raw: unknown = await response.json();
  if (!Array.isArray(raw) || raw.length === 0) {
    throw new ApiError("server returned an empty concept palette");
  }
  return raw.map((entry: unknown) => {
    const e = entry as { id?: unknown; label?: unknown; color?: unknown };
    if (
      typeof e.id !== "number" ||
      typeof e.label !== "string" ||
      !Array.isArray(e.color) ||
      e.color.length !== 3 ||
      !e.color.every((v) => typeof v === "number")
    ) {
      throw new ApiError("malformed palette entry");
    }
    return { id: e.id, label: e.label, color: [e.color[0], e.color[1], e.color[2]] as [number, number, number] };
  });
}

export async function fetchInfo(base: string, fetchFn: FetchLike = fetch): Promise<StoreInfo> {
  const response = await fetchFn(`${base}/api/info`);
  if (!response.ok) {
    throw new ApiError(await detailOf(response), response.status);
  }
  const info = (await response.json()) as StoreInfo;
  if (typeof info.n !== "number" || info.n < 1) {
    throw new ApiError("malformed store info");
  }
  return info;
}

/**
 * Submit the sketch; the body is byte-for-byte `sketchRequestBody(state, k)`,
 * so the grid the server encodes is exactly the grid on screen.
 */
export async function submitSketch(
  base: string,
  state: CanvasState,
  k: number,
  fetchFn: FetchLike = fetch,
): Promise<RankedResult[]> {
  const response = await fetchFn(`${base}/api/query`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: sketchRequestBody(state, k),
  });
  if (!response.ok) {
    throw new ApiError(await detailOf(response), response.status);
  }
  const raw = (await response.json()) as { results?: unknown };
  if (!Array.isArray(raw.results)) {
    throw new ApiError("malformed query response");
  }
  return raw.results as RankedResult[];
}
