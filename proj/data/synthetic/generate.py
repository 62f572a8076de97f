#!/usr/bin/env python3
"""Regenerates the synthetic two-period fixture in this directory.

A 4x6 grid of county-like units (ids "1RRCC"), each split into two
block groups (suffix 01/02). Flows are planted so the pre period has
three column-block communities (columns 0-1, 2-3, 4-5); in the post
period two counties in column 1 rewire to the middle block, and one
county (19999) appears that the pre period never saw.
"""

import json
import random

ROWS, COLS = 4, 6

def county(row, col):
    return f"1{row:02d}{col:02d}"

def community(col):
    return col // 2

COUNTIES = [county(r, c) for r in range(ROWS) for c in range(COLS)]

def block_groups(cid):
    return cid + "01", cid + "02"

def emit(rows, a, b, weight):
    half = weight // 2
    rows.append((a, b, half))
    rows.append((b, a, weight - half))

def flows(rng, moved):
    """moved: set of counties whose community is bumped by one block."""
    rows = []
    comm = {}
    for r in range(ROWS):
        for c in range(COLS):
            cid = county(r, c)
            comm[cid] = community(c) + (1 if cid in moved else 0)

    for i, x in enumerate(COUNTIES):
        x1, x2 = block_groups(x)
        emit(rows, x1, x2, 16 + rng.randrange(8))  # sibling flow -> county self-loop
        for y in COUNTIES[i + 1:]:
            y1, y2 = block_groups(y)
            if comm[x] == comm[y]:
                emit(rows, x1, y1, 36 + rng.randrange(12))
                emit(rows, x2, y2, 36 + rng.randrange(12))
            elif rng.random() < 0.25:
                emit(rows, x1, y2, 2 + rng.randrange(3))
    return rows

def write_csv(path, rows):
    with open(path, "w") as out:
        out.write("origin,destination,weight\n")
        for a, b, w in rows:
            out.write(f"{a},{b},{w}\n")

def write_geojson(path):
    features = []
    for r in range(ROWS):
        for c in range(COLS):
            ring = [[c, r], [c + 1, r], [c + 1, r + 1], [c, r + 1], [c, r]]
            features.append({
                "type": "Feature",
                "properties": {"unit_id": county(r, c)},
                "geometry": {"type": "Polygon", "coordinates": [ring]},
            })
    with open(path, "w") as out:
        json.dump({"type": "FeatureCollection", "features": features}, out, indent=1)
        out.write("\n")

def main():
    rng = random.Random(7)
    write_csv("pre_flows.csv", flows(rng, moved=set()))

    post = flows(rng, moved={county(0, 1), county(1, 1)})
    ghost1, ghost2 = block_groups("19999")
    emit(post, ghost1, ghost2, 20)
    emit(post, ghost1, county(0, 5) + "01", 3)
    write_csv("post_flows.csv", post)

    write_geojson("units.geojson")

if __name__ == "__main__":
    main()
