"""Acceptance suite.

One test per criterion; each prints a PASS/FAIL line (run with -s to see
them inline) and enforces its runtime budget. Oracles are independent of
the code paths they check: endpoint predicates for interval relations,
Floyd-Warshall for graph distances, coordinate recomputation for
transforms, direct set comparisons for retrieval semantics.
"""

import itertools
import math
import random
import threading
import time

import pytest

from pirsearch.bilist import (
    ImageObject,
    SketchQuery,
    build_bilist,
    pir_between,
    transform_bilist,
)
from pirsearch.descriptors import (
    ColorDescriptor,
    color_distance,
    shape_descriptor,
    shape_distance,
)
from pirsearch.engine import Annotation, AnnotationObject, Engine
from pirsearch.evaluation import (
    DEFAULT_THRESHOLDS,
    CategorySpec,
    CorpusSpec,
    default_spec,
    generate_corpus,
    render_text,
    sweep,
)
from pirsearch.geometry import Interval, Point, Polygon, rectangle
from pirsearch.motion import build_scene, derive_timeline, derive_track, scene_similarity
from pirsearch.relations import (
    ALLEN_DIAMETER,
    D4,
    TOPO_DIAMETER,
    AllenRel,
    TopoRel,
    allen_converse,
    allen_distance,
    allen_relation,
    compute_pir,
    pir_converse,
    topo_converse,
    topo_distance,
    topo_relation,
    transform_pir,
)
from pirsearch.similarity import (
    DEFAULT_PARAMS,
    invariant_similarity,
    match_objects,
    retrieve,
)
from pirsearch.store import (
    Catalog,
    ImageRecord,
    insert,
    load,
    mint_id,
    persist,
    rebuild_index,
    utc_now,
)


class Budget:
    """Wall-clock budget enforcement with a per-criterion report line."""

    def __init__(self, name, seconds):
        self.name = name
        self.seconds = seconds
        self.start = time.monotonic()

    def finish(self):
        elapsed = time.monotonic() - self.start
        ok = elapsed < self.seconds
        print(f"ACCEPTANCE {self.name}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s / {self.seconds:.0f}s)")
        assert ok, f"{self.name} exceeded budget: {elapsed:.2f}s >= {self.seconds}s"


def rand_rect(rng, span=12, min_side=1, max_side=8):
    x0 = rng.randint(-span, span)
    y0 = rng.randint(-span, span)
    return rectangle(x0, y0, x0 + rng.randint(min_side, max_side), y0 + rng.randint(min_side, max_side))


def test_criterion_1_worked_three_object_scene():
    budget = Budget("1 worked-example reproduction", 1.0)
    # A: upward-open U, B: block inside the cavity, C: wide slab across the base
    a = ImageObject(
        name="A",
        boundary=Polygon.from_coords(
            [(0, 0), (10, 0), (10, 10), (7, 10), (7, 2), (3, 2), (3, 10), (0, 10)]
        ),
    )
    b = ImageObject(name="B", boundary=rectangle(4, 4, 6, 6))
    c = ImageObject(name="C", boundary=rectangle(-2, -3, 12, 1))
    bl = build_bilist([a, b, c])
    assert [p.codes() for p in bl.relations] == [
        ("dt", "di", "di"),
        ("ov", "d", "oi"),
        ("dt", "d", ">"),
    ]
    budget.finish()


def test_criterion_2_relation_algebra():
    budget = Budget("2 relation algebra", 10.0)

    # JEPD over 10,000 integer interval pairs against raw endpoint predicates
    predicates = {
        AllenRel.BEFORE: lambda a, b: a.hi < b.lo,
        AllenRel.MEETS: lambda a, b: a.hi == b.lo,
        AllenRel.OVERLAPS: lambda a, b: a.lo < b.lo < a.hi < b.hi,
        AllenRel.STARTS: lambda a, b: a.lo == b.lo and a.hi < b.hi,
        AllenRel.DURING: lambda a, b: a.lo > b.lo and a.hi < b.hi,
        AllenRel.FINISHES: lambda a, b: a.lo > b.lo and a.hi == b.hi,
        AllenRel.EQUAL: lambda a, b: a.lo == b.lo and a.hi == b.hi,
        AllenRel.FINISHED_BY: lambda a, b: a.lo < b.lo and a.hi == b.hi,
        AllenRel.CONTAINS: lambda a, b: a.lo < b.lo and a.hi > b.hi,
        AllenRel.STARTED_BY: lambda a, b: a.lo == b.lo and a.hi > b.hi,
        AllenRel.OVERLAPPED_BY: lambda a, b: b.lo < a.lo < b.hi < a.hi,
        AllenRel.MET_BY: lambda a, b: a.lo == b.hi,
        AllenRel.AFTER: lambda a, b: a.lo > b.hi,
    }
    rng = random.Random(101)
    for _ in range(10_000):
        lo1 = rng.randint(-9, 9)
        lo2 = rng.randint(-9, 9)
        a = Interval(float(lo1), float(lo1 + rng.randint(1, 9)))
        b = Interval(float(lo2), float(lo2 + rng.randint(1, 9)))
        holding = [r for r, pred in predicates.items() if pred(a, b)]
        assert len(holding) == 1, f"JEPD violated for {a}, {b}: {holding}"
        assert allen_relation(a, b, eps=1e-9) is holding[0]

    # Converse identities at all three levels on 1,000 random polygon pairs
    rng = random.Random(102)
    for _ in range(1000):
        p, q = rand_rect(rng), rand_rect(rng)
        assert allen_converse(allen_relation(project_x(p), project_x(q))) is allen_relation(
            project_x(q), project_x(p)
        )
        assert topo_converse(topo_relation(p, q)) is topo_relation(q, p)
        assert pir_converse(compute_pir(p, q)) == compute_pir(q, p)

    # Distance tables: exhaustive metric axioms and stated diameters,
    # cross-checked against an independent Floyd-Warshall oracle
    def floyd_warshall(nodes, edges):
        inf = float("inf")
        dist = {(u, v): (0 if u == v else inf) for u in nodes for v in nodes}
        for u, v in edges:
            dist[(u, v)] = dist[(v, u)] = 1
        for k in nodes:
            for i in nodes:
                for j in nodes:
                    if dist[(i, k)] + dist[(k, j)] < dist[(i, j)]:
                        dist[(i, j)] = dist[(i, k)] + dist[(k, j)]
        return dist

    A = AllenRel
    T = TopoRel
    allen_edges = [
        (A.BEFORE, A.MEETS), (A.MEETS, A.OVERLAPS), (A.OVERLAPS, A.STARTS),
        (A.OVERLAPS, A.FINISHED_BY), (A.STARTS, A.DURING), (A.STARTS, A.EQUAL),
        (A.FINISHED_BY, A.EQUAL), (A.FINISHED_BY, A.CONTAINS), (A.DURING, A.FINISHES),
        (A.EQUAL, A.FINISHES), (A.EQUAL, A.STARTED_BY), (A.CONTAINS, A.STARTED_BY),
        (A.FINISHES, A.OVERLAPPED_BY), (A.STARTED_BY, A.OVERLAPPED_BY),
        (A.OVERLAPPED_BY, A.MET_BY), (A.MET_BY, A.AFTER),
    ]
    topo_edges = [
        (T.DISJOINT, T.TOUCHES), (T.TOUCHES, T.OVERLAPS), (T.OVERLAPS, T.COVERS),
        (T.OVERLAPS, T.COVERED_BY), (T.COVERS, T.CONTAINS), (T.COVERED_BY, T.INSIDE),
        (T.COVERS, T.EQUAL), (T.COVERED_BY, T.EQUAL),
    ]
    for nodes, dist_fn, edges, diameter in (
        (list(A), allen_distance, allen_edges, ALLEN_DIAMETER),
        (list(T), topo_distance, topo_edges, TOPO_DIAMETER),
    ):
        oracle = floyd_warshall(nodes, edges)
        assert max(oracle.values()) == diameter
        for x, y in itertools.product(nodes, nodes):
            d = dist_fn(x, y)
            assert d == oracle[(x, y)] / diameter
            assert (d == 0.0) == (x is y)
            assert d == dist_fn(y, x)
        for x, y, z in itertools.product(nodes, nodes, nodes):
            assert dist_fn(x, z) <= dist_fn(x, y) + dist_fn(y, z) + 1e-12
    budget.finish()


def project_x(p):
    from pirsearch.geometry import project

    return project(p, "x")


def test_criterion_3_invariance():
    budget = Budget("3 rotation/reflection invariance", 10.0)
    rng = random.Random(103)

    # Transform commutation on 1,000 random rectangle scenes, all 8 elements
    for _ in range(1000):
        a, b = rand_rect(rng), rand_rect(rng)
        base = compute_pir(a, b)
        for g in D4:
            assert transform_pir(base, g) == compute_pir(g.apply_polygon(a), g.apply_polygon(b))

    # Invariant scoring recovers 100 for every transformed copy
    for _ in range(100):
        n = rng.randint(2, 4)
        objects = [ImageObject(name=f"o{i}", boundary=rand_rect(rng)) for i in range(n)]
        scene = build_bilist(objects)
        for g in D4:
            moved = transform_bilist(scene, g)
            assert abs(invariant_similarity(scene, moved) - 100.0) <= 1e-9
    budget.finish()


def acceptance_corpus():
    """200-image corpus: 4 categories, distractors, unrelated fill."""

    def objs(*parts):
        return tuple(
            AnnotationObject(name=name, polygon=rectangle(x0, y0, x1, y1))
            for name, x0, y0, x1, y1 in parts
        )

    categories = (
        CategorySpec(
            name="harbor",
            template=objs(("sun", 6, 14, 9, 17), ("cloud", 1, 15, 4, 17), ("sea", 0, 0, 20, 6), ("boat", 8, 5, 13, 8)),
            positives=30,
            jitter=1,
        ),
        CategorySpec(
            name="meadow",
            template=objs(("tree", 2, 4, 6, 12), ("house", 10, 4, 16, 10), ("fence", 0, 2, 20, 4)),
            positives=30,
            jitter=1,
        ),
        CategorySpec(
            name="ridge",
            template=objs(("peak", 4, 8, 12, 16), ("trail", 0, 0, 16, 5), ("hut", 13, 5, 16, 8)),
            positives=30,
            jitter=0,
        ),
        CategorySpec(
            name="cove",
            template=objs(("cliff", 0, 4, 6, 16), ("sea", 4, 0, 20, 5), ("gull", 10, 10, 13, 12)),
            positives=30,
            jitter=1,
        ),
    )
    return CorpusSpec(seed=104, categories=categories, distractors_per_category=10, unrelated=40)


def test_criterion_4_threshold_semantics():
    budget = Budget("4 threshold semantics", 5.0)
    spec = acceptance_corpus()
    items = generate_corpus(spec)
    assert len(items) == 200
    corpus = [(item.id, item.bilist) for item in items]

    template = next(c for c in spec.categories if c.name == "harbor")
    query_bl = build_bilist([ImageObject(o.name, o.polygon) for o in template.template])

    # threshold 0 is exactly keyword matching
    got_zero = {
        r.image_id
        for r in retrieve(SketchQuery(bilist=query_bl, threshold=0, limit=500), corpus)
    }
    names = {o.name.casefold() for o in query_bl.objects}
    keyword_set = {
        item.id
        for item in items
        if {o.name.casefold() for o in item.bilist.objects} & names
    }
    assert got_zero == keyword_set

    # threshold 100 returns exactly the arrangement-identical images
    got_hundred = {
        r.image_id
        for r in retrieve(SketchQuery(bilist=query_bl, threshold=100, limit=500), corpus)
    }
    identical = set()
    query_names = [o.name for o in query_bl.objects]
    for item in items:
        matching = match_objects(query_bl, item.bilist)
        if len(matching) != len(query_bl.objects):
            continue
        same = all(
            pir_between(item.bilist, a, b) == pir_between(query_bl, a, b)
            for a, b in itertools.combinations(query_names, 2)
        )
        if same:
            identical.add(item.id)
    assert got_hundred == identical
    assert identical  # the template itself is in the corpus

    # nested result sets across the sweep thresholds
    previous = None
    for theta in DEFAULT_THRESHOLDS:
        ids = {
            r.image_id
            for r in retrieve(SketchQuery(bilist=query_bl, threshold=int(theta), limit=500), corpus)
        }
        if previous is not None:
            assert ids <= previous
        previous = ids
    budget.finish()


def test_criterion_5_sweep_shape():
    budget = Budget("5 sweep shape", 30.0)
    spec = default_spec(seed=105)
    items = generate_corpus(spec)
    table = sweep(items, spec, thresholds=DEFAULT_THRESHOLDS)

    assert table.thresholds == DEFAULT_THRESHOLDS
    assert table.geometric_mean.category == "Geometric Mean"
    text = render_text(table)
    assert "Geometric Mean" in text

    for row in table.rows:
        recalls = [cell[0] for cell in row.cells]
        assert recalls == sorted(recalls, reverse=True), f"recall not monotone for {row.category}"
        assert row.cells[0][0] == 100.0, f"recall@0 not 100 for {row.category}"
        assert row.cells[-1][1] == 100.0, f"precision@80 not 100 for {row.category}"

    # deterministic per seed
    table2 = sweep(generate_corpus(spec), spec, thresholds=DEFAULT_THRESHOLDS)
    assert render_text(table2) == text
    budget.finish()


def test_criterion_6_self_similarity_and_prefilter():
    budget = Budget("6 self-similarity and prefilter", 60.0)
    rng = random.Random(106)
    names = ["sun", "sea", "boat", "tree", "house", "cloud", "rock", "bird", "path", "wall", "pond", "gate"]
    engine = Engine()
    ids = []
    for _ in range(500):
        n = rng.randint(1, 4)
        picked = rng.sample(names, n)
        annotation = Annotation(
            original_url="synthetic://acceptance",
            objects=tuple(
                AnnotationObject(name=name, polygon=rand_rect(rng, span=25)) for name in picked
            ),
        )
        ids.append(engine.insert_image(annotation))

    # every image queried by itself: 100 at rank 1
    for record_id in ids:
        results = engine.query_by_image(record_id, threshold=0, limit=1000)
        assert results[0].image_id == record_id, f"{record_id} not ranked first"
        assert results[0].similarity == 100.0

    # prefiltered retrieval equals the exhaustive scan, same set and order
    snapshot = engine.catalog
    full_corpus = [(rid, snapshot.records[rid].bilist) for rid in snapshot.ids()]
    for _ in range(20):
        picked = rng.sample(names, rng.randint(1, 3))
        query_bl = build_bilist(
            [ImageObject(name, rand_rect(rng, span=25)) for name in picked]
        )
        for theta in (0, 40, 80):
            q = SketchQuery(bilist=query_bl, threshold=theta, limit=1000)
            assert engine.query_sketch(q) == retrieve(q, full_corpus, DEFAULT_PARAMS)
    budget.finish()


def test_criterion_7_descriptors():
    budget = Budget("7 descriptors", 5.0)
    square = rectangle(0, 0, 4, 4)

    def rotated(p, angle):
        c, s = math.cos(angle), math.sin(angle)
        return Polygon(tuple(Point(c * v.x - s * v.y, s * v.x + c * v.y) for v in p.vertices))

    for angle in (math.pi / 4, 0.37, 1.1, 2.9):
        d = shape_distance(shape_descriptor(square), shape_descriptor(rotated(square, angle)))
        assert d <= 1e-6, f"rotation {angle}: distance {d}"

    assert shape_descriptor(square) == shape_descriptor(rectangle(0, 0, 28, 28))
    assert color_distance(ColorDescriptor((0, 0, 0)), ColorDescriptor((1, 1, 1))) == 1.0
    budget.finish()


def test_criterion_8_motion():
    budget = Budget("8 motion", 5.0)
    times = [0.0, 1.0, 2.0, 3.0]

    static = [(t, Point(4.0, 4.0)) for t in times]
    assert derive_track(static).steps == ()

    square_a = [(t, rectangle(0, 0, 2, 2)) for t in times]
    square_b = [(t, rectangle(5, 0, 7, 2)) for t in times]
    timeline = derive_timeline(square_a, square_b)
    assert len(timeline) == 1

    rng = random.Random(108)
    for _ in range(20):
        a = [(t, rand_rect(rng)) for t in times]
        b = [(t, rand_rect(rng)) for t in times]
        tl = derive_timeline(a, b)
        assert tl[0].span.start == times[0]
        assert tl[-1].span.end == times[-1]
        for prev, cur in zip(tl, tl[1:]):
            assert prev.span.end == cur.span.start
            assert prev.pir != cur.pir

    objects = [
        ImageObject(name="A", boundary=square_a[0][1]),
        ImageObject(name="B", boundary=square_b[0][1]),
    ]
    walk = [(t, rectangle(5 - i, 0, 7 - i, 2)) for i, t in enumerate(times)]
    scene = build_scene(objects, [square_a, walk])
    assert scene_similarity(scene, scene) == pytest.approx(100.0)
    budget.finish()


def test_criterion_9_persistence_and_store(tmp_path):
    budget = Budget("9 persistence and store", 60.0)
    rng = random.Random(109)
    names = ["sun", "sea", "boat", "tree", "house", "cloud", "rock", "bird"]

    def record(counter):
        n = rng.randint(1, 3)
        objs = []
        for name in rng.sample(names, n):
            poly = rand_rect(rng, span=25)
            objs.append(
                ImageObject(
                    name=name,
                    boundary=poly,
                    color=ColorDescriptor((rng.random(), rng.random(), rng.random())),
                    shape=shape_descriptor(poly),
                )
            )
        bl = build_bilist(objs)
        record_id = mint_id(counter)
        return ImageRecord(
            id=record_id,
            original_url=f"http://originals.example/{record_id}",
            thumbnail_path=f"thumbnails/{record_id}.png",
            bilist=bl,
            inserted_at=utc_now(),
        )

    catalog = Catalog.empty()
    for i in range(1000):
        catalog = insert(catalog, record(i + 1))

    # round-trip identity
    persist(catalog, tmp_path)
    loaded = load(tmp_path)
    assert loaded.records == catalog.records
    assert loaded.next_id == catalog.next_id

    # incremental index equals a from-scratch rebuild
    assert catalog.name_index == rebuild_index(catalog)
    assert loaded.name_index == rebuild_index(loaded)

    # snapshot isolation under concurrent insert + query interleaving
    engine = Engine()
    seed_ids = [
        engine.insert_image(
            Annotation(
                original_url="synthetic://seed",
                objects=(AnnotationObject(name="sun", polygon=rand_rect(rng)),),
            )
        )
        for _ in range(20)
    ]
    query_bl = build_bilist([ImageObject("sun", rectangle(0, 0, 2, 2))])
    errors = []

    def writer():
        for _ in range(100):
            engine.insert_image(
                Annotation(
                    original_url="synthetic://writer",
                    objects=(AnnotationObject(name="sun", polygon=rand_rect(random.Random())),),
                )
            )

    def reader():
        for _ in range(50):
            snapshot = engine.catalog
            q = SketchQuery(bilist=query_bl, threshold=0, limit=10_000)
            first = engine.query_sketch(q, snapshot=snapshot)
            second = engine.query_sketch(q, snapshot=snapshot)
            if first != second:
                errors.append("same snapshot, different results")
            if len(first) < len(seed_ids):
                errors.append("snapshot lost records")

    threads = [threading.Thread(target=writer)] + [threading.Thread(target=reader) for _ in range(3)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    final = engine.query_sketch(SketchQuery(bilist=query_bl, threshold=0, limit=10_000))
    assert len(final) == 120
    budget.finish()
