#!/usr/bin/env python3
"""Down-sample pixel-wise label maps to majority-vote grids.

Shows the per-cell counting rule, the smallest-id tie-break, and how maps
from sources with different resolutions pool into one grid.
"""

import numpy as np

from semsketch import LabelMap, aggregate, parse_label_map, write_label_map


def render(cells, n):
    glyph = {0: ".", 1: "~", 2: '"', 3: "#", 4: "o"}
    for r in range(n):
        print("  " + " ".join(glyph[int(c)] for c in cells[r * n : (r + 1) * n]))


# ---------------------------------------------------------------------------
# A 64x48 scene: sky above, grass below, a road crossing, water at the edge.
# ---------------------------------------------------------------------------
h, w = 48, 64
scene = np.zeros((h, w), dtype=np.uint16)
scene[:20, :] = 1          # sky
scene[20:, :] = 2          # grass
scene[30:36, :] = 3        # road
scene[40:, 50:] = 4        # pond in the corner
lmap = LabelMap(source="deeplab-voc", cells=scene)

print("aggregating a 64x48 scene to 8x8 (majority per cell):")
grid = aggregate([lmap], 8)
render(grid.cells, 8)

# ---------------------------------------------------------------------------
# Ties are deterministic: equal counts go to the smaller concept id.
# ---------------------------------------------------------------------------
two_pixel = LabelMap(source="tiny", cells=np.array([[4, 1]], dtype=np.uint16))
print("\ntwo-pixel map {water, sky} at n=1 ->", aggregate([two_pixel], 1).cells.tolist(),
      "(tie falls to the smaller id: sky)")

# ---------------------------------------------------------------------------
# Multi-source pooling. A second network sees a larger pond and no road on
# the right; per-cell counts pool across both maps, and cells flip wherever
# the combined evidence outweighs the first source.
# ---------------------------------------------------------------------------
other = scene.copy()
other[36:, 40:] = 4        # pond reaches further
other[30:36, 48:] = 2      # road ends earlier
second = LabelMap(source="deeplab-ade20k", cells=other)

pooled = aggregate([lmap, second], 8)
print("\npooled with a second 64x48 source:")
render(pooled.cells, 8)

changed = int((pooled.cells != grid.cells).sum())
print(f"cells changed by pooling: {changed}")

# ---------------------------------------------------------------------------
# Maps travel as compact binary files; the round trip is bit-exact.
# ---------------------------------------------------------------------------
payload = write_label_map(lmap)
assert write_label_map(parse_label_map(payload)) == payload
print(f"\nserialized map: {len(payload)} bytes ({h}x{w} pixels, source tag "
      f"{lmap.source!r}), round trip exact")
