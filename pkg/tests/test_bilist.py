"""Bi-list model tests: construction, pair lookup, transforms, documents."""

import json
import random

import pytest

from pirsearch.bilist import (
    ImageObject,
    SketchQuery,
    bilist_from_dict,
    bilist_to_dict,
    build_bilist,
    deserialize,
    pir_between,
    serialize,
    transform_bilist,
)
from pirsearch.descriptors import ColorDescriptor
from pirsearch.errors import ParseError, UnknownNameError, ValidationError
from pirsearch.geometry import Polygon, rectangle
from pirsearch.relations import D4, compute_pir


def obj(name, x0, y0, x1, y1, color=None):
    return ImageObject(name=name, boundary=rectangle(x0, y0, x1, y1), color=color)


def u_shape_scene():
    """Three objects whose relation list is (dt,di,di), (ov,d,oi), (dt,d,>)."""
    a = ImageObject(
        name="A",
        boundary=Polygon.from_coords(
            [(0, 0), (10, 0), (10, 10), (7, 10), (7, 2), (3, 2), (3, 10), (0, 10)]
        ),
    )
    b = obj("B", 4, 4, 6, 6)
    c = obj("C", -2, -3, 12, 1)
    return [a, b, c]


class TestBuild:
    def test_single_object_empty_relations(self):
        bl = build_bilist([obj("A", 0, 0, 4, 4)])
        assert bl.relations == ()

    def test_two_object_relation(self):
        bl = build_bilist([obj("A", 0, 0, 4, 4), obj("B", 6, 0, 10, 4)])
        assert [p.codes() for p in bl.relations] == [("dt", "<", "=")]

    def test_three_object_scene(self):
        bl = build_bilist(u_shape_scene())
        assert [p.codes() for p in bl.relations] == [
            ("dt", "di", "di"),
            ("ov", "d", "oi"),
            ("dt", "d", ">"),
        ]

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValidationError):
            build_bilist([obj("A", 0, 0, 1, 1), obj("a", 2, 2, 3, 3)])

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            build_bilist([])

    def test_relation_count_invariant(self):
        rng = random.Random(31)
        for n in (1, 2, 3, 5, 8):
            objs = [obj(f"o{i}", i * 3, 0, i * 3 + 2, 2) for i in range(n)]
            bl = build_bilist(objs)
            assert len(bl.relations) == n * (n - 1) // 2

    def test_matches_pairwise_recomputation(self):
        objs = u_shape_scene()
        bl = build_bilist(objs)
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                expected = compute_pir(objs[i].boundary, objs[j].boundary)
                assert pir_between(bl, objs[i].name, objs[j].name) == expected


class TestPirBetween:
    def test_canonical_order(self):
        bl = build_bilist(u_shape_scene())
        assert pir_between(bl, "A", "B").codes() == ("dt", "di", "di")

    def test_converse_order(self):
        bl = build_bilist(u_shape_scene())
        assert pir_between(bl, "B", "A").codes() == ("dt", "d", "d")

    def test_case_insensitive_lookup(self):
        bl = build_bilist(u_shape_scene())
        assert pir_between(bl, "a", "b").codes() == ("dt", "di", "di")

    def test_same_object_rejected(self):
        bl = build_bilist(u_shape_scene())
        with pytest.raises(UnknownNameError):
            pir_between(bl, "A", "A")

    def test_unknown_name(self):
        bl = build_bilist(u_shape_scene())
        with pytest.raises(UnknownNameError):
            pir_between(bl, "A", "nope")


class TestTransform:
    def test_identity(self):
        bl = build_bilist(u_shape_scene())
        assert transform_bilist(bl, D4.IDENTITY) == bl

    def test_single_pair_rot90(self):
        bl = build_bilist([obj("A", 0, 0, 4, 4), obj("B", 6, 0, 10, 4)])
        rotated = transform_bilist(bl, D4.ROT90)
        assert rotated.relations[0].codes() == ("dt", "=", "<")

    def test_rot90_four_times_is_identity(self):
        bl = build_bilist(u_shape_scene())
        out = bl
        for _ in range(4):
            out = transform_bilist(out, D4.ROT90)
        assert out == bl

    def test_commutes_with_rebuild(self):
        rng = random.Random(32)
        for _ in range(30):
            objs = []
            for i in range(rng.randint(2, 4)):
                x0, y0 = rng.randint(-5, 5), rng.randint(-5, 5)
                objs.append(obj(f"o{i}", x0, y0, x0 + rng.randint(1, 6), y0 + rng.randint(1, 6)))
            bl = build_bilist(objs)
            for g in D4:
                direct = transform_bilist(bl, g)
                rebuilt = build_bilist(
                    [
                        ImageObject(name=o.name, boundary=g.apply_polygon(o.boundary))
                        for o in objs
                    ]
                )
                assert direct.relations == rebuilt.relations


class TestDocuments:
    def test_round_trip_identity(self):
        bl = build_bilist(u_shape_scene())
        assert deserialize(serialize(bl)) == bl

    def test_document_side_round_trip(self):
        # serialize(deserialize(doc)) reproduces a canonical document exactly
        doc = serialize(build_bilist(u_shape_scene()))
        assert serialize(deserialize(doc)) == doc

    def test_round_trip_with_attributes(self):
        bl = build_bilist(
            [
                obj("A", 0, 0, 4, 4, color=ColorDescriptor((1.0, 0.5, 0.0))),
                obj("B", 6, 0, 10, 4),
            ]
        )
        assert deserialize(serialize(bl)) == bl

    def test_relations_always_on_output(self):
        bl = build_bilist([obj("A", 0, 0, 4, 4)])
        doc = json.loads(serialize(bl))
        assert doc["relations"] == []

    def test_relations_recomputed_when_absent(self):
        doc = {
            "objects": [
                {"name": "A", "polygon": [[0, 0], [4, 0], [4, 4], [0, 4]]},
                {"name": "B", "polygon": [[6, 0], [10, 0], [10, 4], [6, 4]]},
            ]
        }
        bl = bilist_from_dict(doc)
        assert [p.codes() for p in bl.relations] == [("dt", "<", "=")]

    def test_missing_relation_entry(self):
        doc = bilist_to_dict(build_bilist(u_shape_scene()))
        doc["relations"] = doc["relations"][:2]
        with pytest.raises(ParseError, match="3 triples"):
            bilist_from_dict(doc)

    def test_unknown_relation_code_named(self):
        doc = bilist_to_dict(build_bilist([obj("A", 0, 0, 4, 4), obj("B", 6, 0, 10, 4)]))
        doc["relations"][0][0] = "xx"
        with pytest.raises(ParseError, match="xx"):
            bilist_from_dict(doc)

    def test_invalid_json_position(self):
        with pytest.raises(ParseError, match="line"):
            deserialize('{"objects": [')

    def test_duplicate_names_in_document(self):
        doc = {
            "objects": [
                {"name": "A", "polygon": [[0, 0], [4, 0], [4, 4], [0, 4]]},
                {"name": "a", "polygon": [[6, 0], [10, 0], [10, 4], [6, 4]]},
            ]
        }
        with pytest.raises(ParseError, match="duplicate"):
            bilist_from_dict(doc)

    def test_two_vertex_polygon_rejected(self):
        doc = {"objects": [{"name": "A", "polygon": [[0, 0], [4, 0]]}]}
        with pytest.raises(ParseError, match="polygon"):
            bilist_from_dict(doc)


class TestSketchQuery:
    def test_threshold_range(self):
        bl = build_bilist([obj("A", 0, 0, 4, 4)])
        SketchQuery(bilist=bl, threshold=0)
        SketchQuery(bilist=bl, threshold=100)
        with pytest.raises(ValidationError):
            SketchQuery(bilist=bl, threshold=101)
        with pytest.raises(ValidationError):
            SketchQuery(bilist=bl, threshold=-1)

    def test_limit_positive(self):
        bl = build_bilist([obj("A", 0, 0, 4, 4)])
        with pytest.raises(ValidationError):
            SketchQuery(bilist=bl, threshold=0, limit=0)
