"""Insertion and search engines.

The engine turns annotations (named polygons over an optional raster)
into stored records, and answers sketch-based and image-based queries
against catalog snapshots. Insertions serialize through one writer lock;
queries read whatever snapshot is current when they start and are never
affected by concurrent inserts.

Scoring scans only the images sharing at least one object name with the
query, pulled from the inverted name index. Images outside that set
cannot score above zero and are never retrieved, so the prefilter is
lossless and must produce byte-identical results to a full linear scan.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from io import BytesIO
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from PIL import Image

from .bilist import ImageObject, SketchQuery, build_bilist
from .descriptors import (
    ColorDescriptor,
    TextureDescriptor,
    average_color,
    shape_descriptor,
    texture_descriptor,
)
from .errors import (
    DegenerateGeometryError,
    InsufficientDataError,
    ParseError,
    ValidationError,
)
from .geometry import Polygon
from .similarity import DEFAULT_PARAMS, MatchParams, ScoredResult, retrieve
from . import store
from .store import Catalog, ImageRecord, make_thumbnail


@dataclass(frozen=True)
class AnnotationObject:
    name: str
    polygon: Polygon
    color: Optional[ColorDescriptor] = None
    texture: Optional[TextureDescriptor] = None


@dataclass(frozen=True)
class Annotation:
    """One image worth of manually traced, named object boundaries."""

    original_url: str
    objects: tuple[AnnotationObject, ...]
    raster: Optional[np.ndarray] = None
    record_id: Optional[str] = None

    def __post_init__(self):
        if not self.objects:
            raise ValidationError("annotation needs at least one object")


def annotation_from_dict(doc: dict, base_dir: str | Path | None = None) -> Annotation:
    """Parse the annotation document schema.

    {"original_url", "raster"?: path, "objects":
      [{"name", "polygon": [[x, y], ...], "color"?: [r,g,b],
        "texture"?: [c, ct, d]}, ...]}
    Relative raster paths resolve against base_dir.
    """
    if not isinstance(doc, dict):
        raise ParseError("annotation must be a JSON object")
    raw_objects = doc.get("objects")
    if not isinstance(raw_objects, list) or not raw_objects:
        raise ParseError("annotation needs a non-empty 'objects' array")
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
                raise ParseError(f"{where}: 'texture' must be 3 values")
            texture = TextureDescriptor(*(float(c) for c in raw))
        objects.append(AnnotationObject(name=name, polygon=boundary, color=color, texture=texture))

    raster = None
    raster_path = doc.get("raster")
    if raster_path:
        path = Path(raster_path)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        raster = load_raster(path)

    record_id = doc.get("id")
    if record_id is not None and not isinstance(record_id, str):
        raise ParseError("'id' must be a string when given")
    return Annotation(
        original_url=str(doc.get("original_url", "")),
        objects=tuple(objects),
        raster=raster,
        record_id=record_id,
    )


def load_raster(path: str | Path) -> np.ndarray:
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"))
    except FileNotFoundError:
        raise ValidationError(f"raster file not found: {path}") from None
    except Exception as exc:
        raise ValidationError(f"cannot read raster {path}: {exc}") from None


def extract_objects(annotation: Annotation) -> list[ImageObject]:
    """Attach descriptors to the annotated boundaries.

    With a raster, colour and texture come from the masked pixels (texture
    silently skipped for regions under 8x8 pixels); without one, supplied
    overrides are used as-is. The shape descriptor always derives from the
    boundary.
    """
    objects = []
    for a in annotation.objects:
        if annotation.raster is not None:
            color = average_color(annotation.raster, a.polygon)
            try:
                texture = texture_descriptor(annotation.raster, a.polygon)
            except InsufficientDataError:
                texture = None
        else:
            color = a.color
            texture = a.texture
        objects.append(
            ImageObject(
                name=a.name,
                boundary=a.polygon,
                color=color,
                shape=shape_descriptor(a.polygon),
                texture=texture,
            )
        )
    return objects


class Engine:
    """Catalog holder with single-writer insert and snapshot queries.

    With a db directory, every successful insert is durable before the
    call returns (catalog rewrite via temp file + rename, thumbnail PNG
    alongside). Without one the engine is memory-only.
    """

    def __init__(self, db_dir: str | Path | None = None):
        self.db_dir = Path(db_dir) if db_dir is not None else None
        self._lock = threading.Lock()
        self._thumbs: dict[str, bytes] = {}
        if self.db_dir is not None:
            (self.db_dir / store.THUMBNAIL_DIR).mkdir(parents=True, exist_ok=True)
        if self.db_dir is not None and (self.db_dir / store.CATALOG_FILE).exists():
            self._catalog = store.load(self.db_dir)
        else:
            self._catalog = Catalog.empty()

    @property
    def catalog(self) -> Catalog:
        """Current snapshot; safe to use for a whole query."""
        return self._catalog

    # --- insertion ---------------------------------------------------------

    def insert_image(self, annotation: Annotation) -> str:
        """Extract descriptors, build the bi-list, store a new record.

        Everything is computed and validated before the catalog is
        touched, so a failing annotation leaves no trace.
        """
        objects = extract_objects(annotation)
        bilist = build_bilist(objects)
        thumb = make_thumbnail(annotation.raster, bilist)

        with self._lock:
            record_id = annotation.record_id or store.mint_id(self._catalog.next_id)
            thumbnail_path = f"{store.THUMBNAIL_DIR}/{record_id}.png"
            record = ImageRecord(
                id=record_id,
                original_url=annotation.original_url,
                thumbnail_path=thumbnail_path,
                bilist=bilist,
                inserted_at=store.utc_now(),
            )
            new_catalog = store.insert(self._catalog, record)
            if self.db_dir is not None:
                thumb.save(store.thumbnail_file(self.db_dir, record_id), format="PNG")
                store.persist(new_catalog, self.db_dir)
            else:
                buf = BytesIO()
                thumb.save(buf, format="PNG")
                self._thumbs[record_id] = buf.getvalue()
            self._catalog = new_catalog
        return record_id

    # --- queries -----------------------------------------------------------

    def _corpus(self, snapshot: Catalog, names: Sequence[str]):
        ids = store.candidates(snapshot, names)
        return [(record_id, snapshot.records[record_id].bilist) for record_id in sorted(ids)]

    def query_sketch(
        self,
        query: SketchQuery,
        params: MatchParams = DEFAULT_PARAMS,
        snapshot: Catalog | None = None,
    ) -> list[ScoredResult]:
        snapshot = snapshot if snapshot is not None else self.catalog
        corpus = self._corpus(snapshot, [o.name for o in query.bilist.objects])
        return retrieve(query, corpus, params)

    def query_by_image(
        self,
        record_id: str,
        threshold: int = 0,
        params: MatchParams = DEFAULT_PARAMS,
        invariant: bool = False,
        limit: int = 50,
        snapshot: Catalog | None = None,
    ) -> list[ScoredResult]:
        """Use a stored record as the query; the source ranks first at 100."""
        snapshot = snapshot if snapshot is not None else self.catalog
        record = snapshot.get(record_id)
        query = SketchQuery(
            bilist=record.bilist,
            threshold=threshold,
            invariant_mode=invariant,
            limit=max(limit, len(snapshot)),
        )
        results = self.query_sketch(query, params, snapshot=snapshot)
        pinned = [r for r in results if r.image_id == record_id]
        rest = [r for r in results if r.image_id != record_id]
        return (pinned + rest)[:limit]

    def random_sample(self, n: int, seed: int | None = None) -> list[ImageRecord]:
        """n distinct records sampled uniformly (all of them if n >= size)."""
        if n < 0:
            raise ValidationError(f"sample size must be >= 0, got {n}")
        snapshot = self.catalog
        ids = snapshot.ids()
        if n >= len(ids):
            chosen = ids
        else:
            chosen = random.Random(seed).sample(ids, n)
        return [snapshot.records[i] for i in chosen]

    # --- thumbnails ---------------------------------------------------------

    def thumbnail_png(self, record_id: str) -> bytes:
        """PNG bytes for a record's iconic image."""
        snapshot = self.catalog
        record = snapshot.get(record_id)
        if self.db_dir is not None:
            path = store.thumbnail_file(self.db_dir, record_id)
            if path.exists():
                return path.read_bytes()
        if record_id in self._thumbs:
            return self._thumbs[record_id]
        buf = BytesIO()
        make_thumbnail(None, record.bilist).save(buf, format="PNG")
        return buf.getvalue()
