/**
 * Pure display helpers: what color every cell and swatch shows is a function
 * of (cells, palette) and nothing else.
 */

import { PaletteEntry } from "./api.js";

export function cssColor(color: [number, number, number]): string {
  return `rgb(${color[0]}, ${color[1]}, ${color[2]})`;
}

export function paletteIndex(palette: PaletteEntry[]): Map<number, PaletteEntry> {
  return new Map(palette.map((entry) => [entry.id, entry]));
}

/** Per-cell CSS colors for a grid; unknown ids render as the background entry. */
export function cellColors(cells: ReadonlyArray<number>, palette: PaletteEntry[]): string[] {
  const byId = paletteIndex(palette);
  const background = byId.get(0);
  return cells.map((id) => {
    const entry = byId.get(id) ?? background;
    return entry ? cssColor(entry.color) : "rgb(0, 0, 0)";
  });
}
