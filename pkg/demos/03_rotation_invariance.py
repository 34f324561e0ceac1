#!/usr/bin/env python3
"""Retrieval up to rotation and reflection.

The same arrangement photographed sideways scores poorly under plain
matching; invariant scoring takes the best score over all eight plane
symmetries of the query and recovers the match exactly.
"""

from pirsearch import (
    D4,
    ImageObject,
    build_bilist,
    image_similarity,
    invariant_similarity,
    rectangle,
    transform_bilist,
)

scene = build_bilist(
    [
        ImageObject("tower", rectangle(4, 0, 6, 9)),
        ImageObject("flag", rectangle(4.5, 9, 5.5, 10)),
        ImageObject("moat", rectangle(0, 0, 10, 1)),
    ]
)

print("plain vs invariant similarity against transformed copies")
print(f"{'transform':>18} {'plain':>8} {'invariant':>10}")
for g in D4:
    moved = transform_bilist(scene, g)
    plain = image_similarity(scene, moved)
    best = invariant_similarity(scene, moved)
    print(f"{g.name.lower():>18} {plain:8.1f} {best:10.1f}")
