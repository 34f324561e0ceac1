"""The object-relationship image model.

An image (or a sketch) is a *bi-list*: an ordered list of named,
attributed objects plus one relation triple per unordered object pair,
stored in canonical (i < j) order and describing object i relative to
object j. Converses are derived on demand, halving storage.

Values are immutable after construction, so bi-lists can be shared
freely across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .descriptors import ColorDescriptor, ShapeDescriptor, TextureDescriptor
from .errors import DegenerateGeometryError, ParseError, UnknownNameError, ValidationError
from .geometry import Polygon
from .relations import D4, PIR, compute_pir, pir_converse, transform_pir


@dataclass(frozen=True)
class ImageObject:
    """Named object with a boundary polygon and optional visual attributes."""

    name: str
    boundary: Polygon
    color: Optional[ColorDescriptor] = None
    shape: Optional[ShapeDescriptor] = None
    texture: Optional[TextureDescriptor] = None

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise ValidationError("object name must be non-empty")


@dataclass(frozen=True)
class BiList:
    """Ordered objects plus relation triples for every canonical pair."""

    objects: tuple[ImageObject, ...]
    relations: tuple[PIR, ...]

    def __post_init__(self):
        n = len(self.objects)
        expected = n * (n - 1) // 2
        if len(self.relations) != expected:
            raise ValidationError(
                f"{n} objects need {expected} pairwise relations, got {len(self.relations)}"
            )

    def names(self) -> list[str]:
        return [o.name for o in self.objects]

    def index_of(self, name: str) -> int:
        folded = name.casefold()
        for i, o in enumerate(self.objects):
            if o.name.casefold() == folded:
                return i
        raise UnknownNameError(f"no object named {name!r}")

    def relation_at(self, i: int, j: int) -> PIR:
        """Stored triple for canonical pair (i, j), i < j."""
        n = len(self.objects)
        if not (0 <= i < j < n):
            raise ValidationError(f"bad pair indices ({i}, {j}) for {n} objects")
        # pairs (0,1..n-1), (1,2..n-1), ... laid out consecutively
        offset = i * (2 * n - i - 1) // 2 + (j - i - 1)
        return self.relations[offset]


def canonical_pairs(n: int) -> Iterable[tuple[int, int]]:
    for i in range(n):
        for j in range(i + 1, n):
            yield (i, j)


def build_bilist(objects: Iterable[ImageObject]) -> BiList:
    """Compute the pairwise relation list for the given objects.

    Object order is preserved; names must be unique (case-insensitively,
    since retrieval matches names case-insensitively).
    """
    objs = tuple(objects)
    if not objs:
        raise ValidationError("an image needs at least one object")
    seen: set[str] = set()
    for o in objs:
        folded = o.name.casefold()
        if folded in seen:
            raise ValidationError(f"duplicate object name {o.name!r}")
        seen.add(folded)
    relations = tuple(
        compute_pir(objs[i].boundary, objs[j].boundary) for i, j in canonical_pairs(len(objs))
    )
    return BiList(objects=objs, relations=relations)


def pir_between(b: BiList, name_a: str, name_b: str) -> PIR:
    """Relation triple of the named object A relative to B.

    Reads the stored triple when (A, B) is in canonical order and its
    converse otherwise.
    """
    i = b.index_of(name_a)
    j = b.index_of(name_b)
    if i == j:
        raise UnknownNameError(f"cannot relate object {name_a!r} to itself")
    if i < j:
        return b.relation_at(i, j)
    return pir_converse(b.relation_at(j, i))


def transform_bilist(b: BiList, g: D4) -> BiList:
    """Apply a plane symmetry to the whole representation.

    Every stored triple is mapped through the relation-level transform and
    every boundary through the coordinate-level one, so the result stays
    self-consistent. Names and visual attributes are untouched.
    """
    objects = tuple(replace(o, boundary=g.apply_polygon(o.boundary)) for o in b.objects)
    relations = tuple(transform_pir(p, g) for p in b.relations)
    return BiList(objects=objects, relations=relations)


@dataclass(frozen=True)
class SketchQuery:
    """A query bi-list plus retrieval controls."""

    bilist: BiList
    threshold: int = 0
    invariant_mode: bool = False
    limit: int = 50

    def __post_init__(self):
        if not isinstance(self.threshold, int) or not (0 <= self.threshold <= 100):
            raise ValidationError(f"threshold must be an integer in [0, 100], got {self.threshold!r}")
        if self.limit < 1:
            raise ValidationError(f"limit must be positive, got {self.limit}")
        if not self.bilist.objects:
            raise ValidationError("query needs at least one object")


# --- document (de)serialization -------------------------------------------
#
# Wire/file schema, used both in stored catalogs and over the HTTP API:
# {"objects": [{"name", "polygon": [[x, y], ...],
#               "color": [r, g, b]?, "texture": [c, ct, d]?}, ...],
#  "relations": [["dt", "di", "di"], ...]}
# Relations are optional on input (recomputed from geometry) and always
# present on output. Shape descriptors are derived data and not carried.


def bilist_to_dict(b: BiList) -> dict:
    objects = []
    for o in b.objects:
        entry: dict = {"name": o.name, "polygon": [[v.x, v.y] for v in o.boundary.vertices]}
        if o.color is not None:
            entry["color"] = list(o.color.rgb)
        if o.texture is not None:
            entry["texture"] = list(o.texture.as_tuple())
        objects.append(entry)
    return {
        "objects": objects,
        "relations": [list(p.codes()) for p in b.relations],
    }


def serialize(b: BiList) -> str:
    return json.dumps(bilist_to_dict(b), sort_keys=True)


def bilist_from_dict(doc: dict) -> BiList:
    if not isinstance(doc, dict):
        raise ParseError(f"bi-list document must be an object, got {type(doc).__name__}")
    raw_objects = doc.get("objects")
    if not isinstance(raw_objects, list) or not raw_objects:
        raise ParseError("bi-list document needs a non-empty 'objects' array")

    objects = []
    for idx, entry in enumerate(raw_objects):
        where = f"objects[{idx}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: expected an object")
        name = entry.get("name")
        if not isinstance(name, str) or not name.strip():
            raise ParseError(f"{where}: missing or empty 'name'")
        polygon = entry.get("polygon")
        if not isinstance(polygon, list) or len(polygon) < 3:
            raise ParseError(f"{where}: 'polygon' must list at least 3 [x, y] vertices")
        try:
            boundary = Polygon.from_coords(polygon)
        except (TypeError, ValueError, ValidationError, DegenerateGeometryError) as exc:
            raise ParseError(f"{where}: bad polygon: {exc}") from None
        color = None
        if entry.get("color") is not None:
            raw = entry["color"]
            if not isinstance(raw, list) or len(raw) != 3:
                raise ParseError(f"{where}: 'color' must be [r, g, b]")
            color = ColorDescriptor(tuple(float(c) for c in raw))
        texture = None
        if entry.get("texture") is not None:
            raw = entry["texture"]
            if not isinstance(raw, list) or len(raw) != 3:
                raise ParseError(f"{where}: 'texture' must be [coarseness, contrast, directionality]")
            texture = TextureDescriptor(*(float(c) for c in raw))
        objects.append(ImageObject(name=name, boundary=boundary, color=color, texture=texture))

    seen: set[str] = set()
    for o in objects:
        folded = o.name.casefold()
        if folded in seen:
            raise ParseError(f"duplicate object name {o.name!r}")
        seen.add(folded)

    raw_relations = doc.get("relations")
    if raw_relations is None:
        return build_bilist(objects)

    n = len(objects)
    expected = n * (n - 1) // 2
    if not isinstance(raw_relations, list) or len(raw_relations) != expected:
        got = len(raw_relations) if isinstance(raw_relations, list) else type(raw_relations).__name__
        raise ParseError(f"'relations' must hold {expected} triples for {n} objects, got {got}")
    relations = []
    for idx, codes in enumerate(raw_relations):
        try:
            relations.append(PIR.from_codes(codes))
        except ValidationError as exc:
            raise ParseError(f"relations[{idx}]: {exc}") from None
    return BiList(objects=tuple(objects), relations=tuple(relations))


def deserialize(text: str) -> BiList:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return bilist_from_dict(doc)
