#!/usr/bin/env python3
"""Tour of the qualitative relation layers.

Two objects are compared three ways at once: region topology, and the
Allen relations of their x- and y-axis projections. The triple of all
three is the symbolic fingerprint retrieval runs on.
"""

from pirsearch import (
    D4,
    Interval,
    Polygon,
    allen_relation,
    build_bilist,
    compute_pir,
    ImageObject,
    pir_distance,
    rectangle,
    topo_relation,
    transform_pir,
)

print("Allen relations between intervals")
for a, b in [((0, 2), (3, 5)), ((0, 5), (0, 5)), ((0, 5), (1, 3)), ((0, 3), (3, 6))]:
    rel = allen_relation(Interval(*a), Interval(*b))
    print(f"  {a} vs {b}: {rel.value}")

print("\nTopological relations between boxes")
pairs = [
    (rectangle(0, 0, 4, 4), rectangle(6, 0, 10, 4), "separated"),
    (rectangle(0, 0, 4, 4), rectangle(4, 0, 8, 4), "sharing an edge"),
    (rectangle(0, 0, 10, 10), rectangle(2, 2, 8, 8), "nested"),
    (rectangle(0, 0, 4, 4), rectangle(2, 2, 6, 6), "partially overlapping"),
]
for a, b, label in pairs:
    print(f"  {label}: {topo_relation(a, b).value}")

print("\nFull triples (delta, chi, psi)")
a, b = rectangle(0, 0, 4, 4), rectangle(6, 0, 10, 4)
print(f"  side by side: {compute_pir(a, b).codes()}")

# A three-object arrangement: a U-shaped region A whose projections contain
# a block B it never touches, and a wide slab C crossing A's base.
u_shape = Polygon.from_coords(
    [(0, 0), (10, 0), (10, 10), (7, 10), (7, 2), (3, 2), (3, 10), (0, 10)]
)
scene = build_bilist(
    [
        ImageObject("A", u_shape),
        ImageObject("B", rectangle(4, 4, 6, 6)),
        ImageObject("C", rectangle(-2, -3, 12, 1)),
    ]
)
print("\nBi-list of the three-object scene (pairs AB, AC, BC):")
for codes in (p.codes() for p in scene.relations):
    print(f"  {codes}")

print("\nRelation distance is graph distance in the neighborhood structure")
p1 = compute_pir(rectangle(0, 0, 4, 4), rectangle(6, 0, 10, 4))   # (dt, <, =)
p2 = compute_pir(rectangle(0, 0, 4, 4), rectangle(4, 0, 8, 4))    # (to, m, =)
p3 = compute_pir(rectangle(0, 0, 4, 4), rectangle(-6, 0, -2, 4))  # (dt, >, =)
print(f"  {p1.codes()} to {p2.codes()}: {pir_distance(p1, p2):.3f}  (one nudge)")
print(f"  {p1.codes()} to {p3.codes()}: {pir_distance(p1, p3):.3f}  (opposite side)")

print("\nA quarter-turn acts directly on triples, no geometry needed")
print(f"  {p1.codes()} under rot90: {transform_pir(p1, D4.ROT90).codes()}")
