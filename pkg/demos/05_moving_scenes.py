#!/usr/bin/env python3
"""Moving-object scenes: tracks, relation timelines, scene similarity.

An object's motion compresses to maximal (distance, compass direction,
time span) steps; a pair's relation history compresses to maximal
constant-triple runs. Similarity blends both, on timelines normalized to
unit duration so playback speed is irrelevant.
"""

from pirsearch import (
    ImageObject,
    Point,
    build_scene,
    derive_track,
    rectangle,
    scene_similarity,
    track_distance,
)

print("track derivation from timed positions")
samples = [
    (0.0, Point(0, 0)),
    (1.0, Point(0, 2)),
    (2.0, Point(0, 4)),   # still heading north: merges
    (3.0, Point(3, 4)),   # turns east
]
track = derive_track(samples)
for step in track.steps:
    print(
        f"  {step.direction.value}: distance {step.distance:.1f}"
        f" over [{step.span.start:.0f}, {step.span.end:.0f}]"
    )
print(f"  stationary object: {derive_track([(0.0, Point(5, 5)), (1.0, Point(5, 5))]).steps} (empty)")

print("\nscene: a cart rolling up to a parked wagon")
times = [0.0, 1.0, 2.0, 3.0, 4.0]
wagon = [(t, rectangle(6, 0, 9, 2)) for t in times]
cart = [(t, rectangle(-4 + 3 * i, 0, -2 + 3 * i, 2)) for i, t in enumerate(times)]
objects = [
    ImageObject("wagon", wagon[0][1]),
    ImageObject("cart", cart[0][1]),
]
scene = build_scene(objects, [wagon, cart])
print("  relation timeline (wagon relative to cart, the stored pair order):")
for run in scene.timelines[0]:
    print(f"    {run.pir.codes()} during [{run.span.start:.0f}, {run.span.end:.0f}]")
print(f"  cart track: {[s.direction.value for s in scene.tracks[1].steps]}")

print("\nscene similarity")
print(f"  scene vs itself: {scene_similarity(scene, scene):.1f}")

# Same episode with the cart coming from the other side
cart_back = [(t, rectangle(16 - 3 * i, 0, 18 - 3 * i, 2)) for i, t in enumerate(times)]
reverse = build_scene(
    [ImageObject("wagon", wagon[0][1]), ImageObject("cart", cart_back[0][1])],
    [wagon, cart_back],
)
print(f"  vs mirrored approach: {scene_similarity(scene, reverse):.1f}")
print(f"  track edit distance cart vs reversed cart: "
      f"{track_distance(scene.tracks[1], reverse.tracks[1]):.2f}")
