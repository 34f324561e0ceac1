#!/usr/bin/env python3
"""Sketch-based retrieval and the accuracy threshold.

A tiny catalog of seaside scenes is queried with a rough sketch at
increasing thresholds: 0 behaves as pure keyword matching, 100 demands
the identical spatial arrangement, and the result set only ever shrinks
on the way up.
"""

from pirsearch import (
    Annotation,
    AnnotationObject,
    Engine,
    ImageObject,
    SketchQuery,
    build_bilist,
    rectangle,
)


def scene(url, *objects):
    return Annotation(
        original_url=url,
        objects=tuple(AnnotationObject(name=n, polygon=rectangle(*box)) for n, box in objects),
    )


engine = Engine()  # memory-only; pass db_dir= for a persistent catalog

catalog = [
    scene("demo://sunrise", ("sun", (2, 6, 4, 8)), ("sea", (0, 0, 10, 3))),
    scene("demo://sunset", ("sun", (6, 5, 8, 7)), ("sea", (0, 0, 10, 3))),
    scene("demo://sun-in-sea", ("sun", (4, 1, 6, 3)), ("sea", (0, 0, 10, 4))),
    scene("demo://night", ("moon", (2, 6, 4, 8)), ("sea", (0, 0, 10, 3))),
    scene("demo://desert", ("sun", (2, 6, 4, 8)), ("dune", (0, 0, 10, 3))),
]
for annotation in catalog:
    record_id = engine.insert_image(annotation)
    names = ", ".join(o.name for o in annotation.objects)
    print(f"stored {record_id}: {annotation.original_url} ({names})")

# Sketch: a sun above a band of sea
sketch = build_bilist(
    [
        ImageObject("sun", rectangle(2, 6, 4, 8)),
        ImageObject("sea", rectangle(0, 0, 10, 3)),
    ]
)

for threshold in (0, 50, 90, 100):
    results = engine.query_sketch(SketchQuery(bilist=sketch, threshold=threshold))
    listing = ", ".join(f"{r.image_id}@{r.similarity:.0f}%" for r in results) or "(none)"
    print(f"threshold {threshold:3d}: {listing}")

print("\nquery by example: click the sunset picture")
by_image = engine.query_by_image("img-000002", threshold=0)
for r in by_image:
    print(f"  {r.image_id}  {r.similarity:5.1f}%  matched {','.join(r.matched)}")
