"""Image database: representation records, an inverted name index, and
iconic thumbnails.

The database keeps three kinds of data, following the classic split: the
original full-size image stays wherever it lives and is referenced only
by URL, the thumbnail is stored locally as a PNG, and the symbolic
representation (the bi-list) is stored locally because retrieval runs on
it.

Catalogs are immutable snapshots: ``insert`` returns a new catalog and
never touches the old one, which is what makes concurrent readers safe
without locks. On disk a catalog is one directory holding
``catalog.jsonl`` (a header line with the id counter, then one record
per line) plus ``thumbnails/<id>.png``.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional

import numpy as np
from PIL import Image, ImageDraw

from .bilist import BiList, bilist_from_dict, bilist_to_dict
from .descriptors import shape_descriptor
from .errors import ConflictError, NotFoundError, StoreError

CATALOG_FILE = "catalog.jsonl"
THUMBNAIL_DIR = "thumbnails"
FORMAT_TAG = "pir-catalog/1"
THUMBNAIL_MAX_DIM = 128


@dataclass(frozen=True)
class ImageRecord:
    """One stored image: pointers out, bi-list in."""

    id: str
    original_url: str
    thumbnail_path: str
    bilist: BiList
    inserted_at: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "original_url": self.original_url,
            "thumbnail": self.thumbnail_path,
            "inserted_at": self.inserted_at,
            "bilist": bilist_to_dict(self.bilist),
        }

    @staticmethod
    def from_dict(doc: dict) -> "ImageRecord":
        return ImageRecord(
            id=doc["id"],
            original_url=doc.get("original_url", ""),
            thumbnail_path=doc.get("thumbnail", ""),
            bilist=bilist_from_dict(doc["bilist"]),
            inserted_at=doc.get("inserted_at", ""),
        )


def _hydrate_shapes(bl: BiList) -> BiList:
    """Recompute boundary-derived shape descriptors after a load.

    Shape is derived data; the wire schema does not carry it, so records
    coming off disk get it recomputed, reproducing the ingest-time values
    exactly.
    """
    objects = tuple(
        replace(o, shape=shape_descriptor(o.boundary)) if o.shape is None else o
        for o in bl.objects
    )
    return BiList(objects=objects, relations=bl.relations)


@dataclass(frozen=True)
class Catalog:
    """Immutable snapshot of all records plus the inverted name index."""

    records: dict[str, ImageRecord]
    name_index: dict[str, frozenset[str]]
    next_id: int = 1

    @staticmethod
    def empty() -> "Catalog":
        return Catalog(records={}, name_index={}, next_id=1)

    def __len__(self) -> int:
        return len(self.records)

    def get(self, record_id: str) -> ImageRecord:
        try:
            return self.records[record_id]
        except KeyError:
            raise NotFoundError(f"no record with id {record_id!r}") from None

    def ids(self) -> list[str]:
        return sorted(self.records)


def mint_id(counter: int) -> str:
    return f"img-{counter:06d}"


def insert(catalog: Catalog, record: ImageRecord) -> Catalog:
    """New snapshot with the record added and indexed."""
    if record.id in catalog.records:
        raise ConflictError(f"record id {record.id!r} already present")
    records = dict(catalog.records)
    records[record.id] = record
    index = dict(catalog.name_index)
    for name in {o.name.casefold() for o in record.bilist.objects}:
        index[name] = index.get(name, frozenset()) | {record.id}
    next_id = catalog.next_id
    if record.id.startswith("img-"):
        try:
            next_id = max(next_id, int(record.id[4:]) + 1)
        except ValueError:
            pass
    return Catalog(records=records, name_index=index, next_id=next_id)


def candidates(catalog: Catalog, names: Iterable[str]) -> set[str]:
    """Union of the postings for the given names; exactly the set an
    all-accepting (threshold 0) query would return."""
    out: set[str] = set()
    for name in names:
        out |= catalog.name_index.get(name.casefold(), frozenset())
    return out


def rebuild_index(catalog: Catalog) -> dict[str, frozenset[str]]:
    """From-scratch index, for consistency auditing."""
    index: dict[str, set[str]] = {}
    for record in catalog.records.values():
        for name in {o.name.casefold() for o in record.bilist.objects}:
            index.setdefault(name, set()).add(record.id)
    return {k: frozenset(v) for k, v in index.items()}


# --- persistence -----------------------------------------------------------


def persist(catalog: Catalog, directory: str | Path) -> None:
    """Atomically write catalog.jsonl (temp file + rename)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / THUMBNAIL_DIR).mkdir(exist_ok=True)
    header = {"format": FORMAT_TAG, "next_id": catalog.next_id}
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".catalog-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(json.dumps(header) + "\n")
            for record_id in sorted(catalog.records):
                fh.write(json.dumps(catalog.records[record_id].to_dict(), sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_path, directory / CATALOG_FILE)
    finally:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)


def load(directory: str | Path) -> Catalog:
    """Read a persisted catalog; corrupt lines abort the whole load."""
    directory = Path(directory)
    path = directory / CATALOG_FILE
    if not path.exists():
        raise StoreError(f"no catalog file at {path}")
    catalog = Catalog.empty()
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise StoreError(f"{path} is empty, expected a header line")
    try:
        header = json.loads(lines[0])
        if header.get("format") != FORMAT_TAG:
            raise StoreError(f"{path}: unknown catalog format {header.get('format')!r}")
        next_id = int(header.get("next_id", 1))
    except (json.JSONDecodeError, ValueError, AttributeError) as exc:
        raise StoreError(f"{path}: bad header line: {exc}") from None

    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
            record = ImageRecord.from_dict(doc)
            record = replace(record, bilist=_hydrate_shapes(record.bilist))
        except Exception as exc:
            raise StoreError(f"{path}: corrupt record at line {lineno}: {exc}") from None
        catalog = insert(catalog, record)
    return Catalog(records=catalog.records, name_index=catalog.name_index,
                   next_id=max(next_id, catalog.next_id))


def thumbnail_file(directory: str | Path, record_id: str) -> Path:
    return Path(directory) / THUMBNAIL_DIR / f"{record_id}.png"


# --- thumbnails ------------------------------------------------------------

_SCHEMATIC_MARGIN = 6


def make_thumbnail(
    raster: Optional[np.ndarray],
    bilist: BiList,
    max_dim: int = THUMBNAIL_MAX_DIM,
) -> Image.Image:
    """Iconic version of an image.

    With a raster, downscale it preserving aspect so the larger dimension
    is max_dim (smaller rasters pass through). Without one, render a
    schematic: the object polygons filled with their stored colours (gray
    when absent) on white, each labeled with its name.
    """
    if raster is not None:
        img = Image.fromarray(np.asarray(raster, dtype=np.uint8), mode="RGB")
        w, h = img.size
        scale = max_dim / max(w, h)
        if scale < 1.0:
            img = img.resize((max(1, round(w * scale)), max(1, round(h * scale))))
        return img

    xs = [v.x for o in bilist.objects for v in o.boundary.vertices]
    ys = [v.y for o in bilist.objects for v in o.boundary.vertices]
    span_x = max(xs) - min(xs) or 1.0
    span_y = max(ys) - min(ys) or 1.0
    scale = (max_dim - 2 * _SCHEMATIC_MARGIN) / max(span_x, span_y)
    width = max(16, round(span_x * scale) + 2 * _SCHEMATIC_MARGIN)
    height = max(16, round(span_y * scale) + 2 * _SCHEMATIC_MARGIN)

    img = Image.new("RGB", (width, height), "white")
    draw = ImageDraw.Draw(img)
    for o in bilist.objects:
        # model +y up, raster row 0 at top
        pts = [
            (
                _SCHEMATIC_MARGIN + (v.x - min(xs)) * scale,
                height - _SCHEMATIC_MARGIN - (v.y - min(ys)) * scale,
            )
            for v in o.boundary.vertices
        ]
        if o.color is not None:
            fill = tuple(round(c * 255) for c in o.color.rgb)
        else:
            fill = (180, 180, 180)
        draw.polygon(pts, fill=fill, outline=(60, 60, 60))
        label_x = min(p[0] for p in pts)
        label_y = min(p[1] for p in pts)
        draw.text((label_x + 2, label_y + 1), o.name, fill=(0, 0, 0))
    return img


def utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
