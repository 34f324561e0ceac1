"""Moving-object extension: per-object motion tracks, time-stamped
relation sequences, and scene-level similarity.

A track compresses sampled motion into maximal steps of (distance,
compass direction, time interval); a stationary object has an empty
track. A relation timeline compresses per-sample triples into maximal
constant runs whose spans partition the scene duration. Scene scoring
normalizes both timelines to [0, 1], so uniform playback speed does not
matter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .bilist import ImageObject, canonical_pairs
from .errors import (
    AlignmentError,
    DegenerateGeometryError,
    InsufficientDataError,
    ValidationError,
)
from .geometry import Point, Polygon, centroid
from .relations import PIR, compute_pir, pir_converse
from .similarity import MatchParams, DEFAULT_PARAMS, pir_distance

# Displacements shorter than this are treated as stillness (model units).
EPS_MOVE = 1e-3


class Compass(str, Enum):
    N = "n"
    NE = "ne"
    E = "e"
    SE = "se"
    S = "s"
    SW = "sw"
    W = "w"
    NW = "nw"


# Order matches ascending math angle from +x, in 45 degree steps.
_SECTOR_ORDER = (
    Compass.E,
    Compass.NE,
    Compass.N,
    Compass.NW,
    Compass.W,
    Compass.SW,
    Compass.S,
    Compass.SE,
)


def quantize_direction(dx: float, dy: float) -> Compass:
    """Nearest of 8 compass sectors; boundary ties go counter-clockwise."""
    angle = math.degrees(math.atan2(dy, dx))
    index = math.floor((angle + 22.5) / 45.0) % 8
    return _SECTOR_ORDER[index]


@dataclass(frozen=True)
class TimeInterval:
    start: float
    end: float

    def __post_init__(self):
        if not self.start < self.end:
            raise ValidationError(f"time interval needs start < end, got [{self.start}, {self.end}]")

    @property
    def length(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class TrackStep:
    distance: float
    direction: Compass
    span: TimeInterval

    def __post_init__(self):
        if self.distance <= 0:
            raise ValidationError(f"track step distance must be positive, got {self.distance}")


@dataclass(frozen=True)
class Track:
    """Maximal motion steps; empty for a stationary object."""

    steps: tuple[TrackStep, ...] = ()

    def __post_init__(self):
        for prev, cur in zip(self.steps, self.steps[1:]):
            if prev.direction is cur.direction:
                raise ValidationError("consecutive track steps must change direction")
            if cur.span.start < prev.span.end - 1e-9:
                raise ValidationError("track steps must be time-ordered and non-overlapping")

    def directions(self) -> tuple[Compass, ...]:
        return tuple(s.direction for s in self.steps)


@dataclass(frozen=True)
class TimedPIR:
    pir: PIR
    span: TimeInterval


@dataclass(frozen=True)
class Scene:
    """Moving-object counterpart of a bi-list.

    ``timelines`` holds one TimedPIR run list per canonical object pair,
    in the same (i < j) order a bi-list uses.
    """

    objects: tuple[ImageObject, ...]
    tracks: tuple[Track, ...]
    timelines: tuple[tuple[TimedPIR, ...], ...]
    duration: TimeInterval

    def __post_init__(self):
        n = len(self.objects)
        if len(self.tracks) != n:
            raise ValidationError(f"{n} objects need {n} tracks, got {len(self.tracks)}")
        expected = n * (n - 1) // 2
        if len(self.timelines) != expected:
            raise ValidationError(f"{n} objects need {expected} timelines, got {len(self.timelines)}")
        for timeline in self.timelines:
            _check_partition(timeline, self.duration)

    def names(self) -> list[str]:
        return [o.name for o in self.objects]

    def timeline_between(self, name_a: str, name_b: str) -> tuple[TimedPIR, ...]:
        names = [o.name.casefold() for o in self.objects]
        try:
            i = names.index(name_a.casefold())
            j = names.index(name_b.casefold())
        except ValueError as exc:
            raise ValidationError(f"unknown object name: {exc}") from None
        n = len(self.objects)
        if i < j:
            offset = i * (2 * n - i - 1) // 2 + (j - i - 1)
            return self.timelines[offset]
        offset = j * (2 * n - j - 1) // 2 + (i - j - 1)
        return tuple(TimedPIR(pir_converse(t.pir), t.span) for t in self.timelines[offset])


def _check_partition(timeline: Sequence[TimedPIR], duration: TimeInterval, tol: float = 1e-9):
    if not timeline:
        raise ValidationError("relation timeline cannot be empty")
    if abs(timeline[0].span.start - duration.start) > tol:
        raise ValidationError("timeline must start at the scene start")
    if abs(timeline[-1].span.end - duration.end) > tol:
        raise ValidationError("timeline must end at the scene end")
    for prev, cur in zip(timeline, timeline[1:]):
        if abs(prev.span.end - cur.span.start) > tol:
            raise ValidationError("timeline spans must abut")
        if prev.pir == cur.pir:
            raise ValidationError("adjacent timeline entries must differ")


def derive_track(
    samples: Sequence[tuple[float, Point]],
    eps_move: float = EPS_MOVE,
) -> Track:
    """Compress timed positions into maximal same-direction steps.

    Displacements below eps_move count as stillness and contribute no
    step; an object that never moves yields an empty track.
    """
    if len(samples) < 2:
        raise InsufficientDataError(f"track derivation needs >= 2 samples, got {len(samples)}")
    times = [t for t, _ in samples]
    if any(t1 >= t2 for t1, t2 in zip(times, times[1:])):
        raise ValidationError("sample times must be strictly increasing")

    moves: list[tuple[float, Compass, float, float]] = []  # distance, dir, t0, t1
    for (t0, p0), (t1, p1) in zip(samples, samples[1:]):
        dx, dy = p1.x - p0.x, p1.y - p0.y
        dist = math.hypot(dx, dy)
        if dist < eps_move:
            continue
        moves.append((dist, quantize_direction(dx, dy), t0, t1))

    steps: list[TrackStep] = []
    for dist, direction, t0, t1 in moves:
        if steps and steps[-1].direction is direction:
            last = steps[-1]
            steps[-1] = TrackStep(
                distance=last.distance + dist,
                direction=direction,
                span=TimeInterval(last.span.start, t1),
            )
        else:
            steps.append(TrackStep(distance=dist, direction=direction, span=TimeInterval(t0, t1)))
    return Track(tuple(steps))


def derive_timeline(
    samples_a: Sequence[tuple[float, Polygon]],
    samples_b: Sequence[tuple[float, Polygon]],
    duration: Optional[TimeInterval] = None,
) -> tuple[TimedPIR, ...]:
    """Relation triple runs for a pair of synchronized object samples.

    The triple is computed at every sample; equal consecutive triples
    merge into one run. A run holds from its first sample time until the
    next run begins; the final run ends at the scene end. A relation first
    observed exactly at the scene's final instant has zero duration and is
    omitted. With a single sample an explicit duration is required.
    """
    if not samples_a or not samples_b:
        raise InsufficientDataError("timeline derivation needs at least one sample")
    times_a = [t for t, _ in samples_a]
    times_b = [t for t, _ in samples_b]
    if times_a != times_b:
        raise AlignmentError("objects must be sampled at identical times")
    if any(t1 >= t2 for t1, t2 in zip(times_a, times_a[1:])):
        raise ValidationError("sample times must be strictly increasing")

    if duration is None:
        if len(times_a) < 2:
            raise InsufficientDataError("single-sample timelines need an explicit scene duration")
        duration = TimeInterval(times_a[0], times_a[-1])
    if duration.start > times_a[0] or duration.end < times_a[-1]:
        raise ValidationError("scene duration must cover all sample times")

    runs: list[tuple[PIR, float]] = []  # triple, first sample time
    for (t, pa), (_, pb) in zip(samples_a, samples_b):
        pir = compute_pir(pa, pb)
        if not runs or runs[-1][0] != pir:
            runs.append((pir, t))
    while len(runs) > 1 and runs[-1][1] >= duration.end:
        runs.pop()

    out: list[TimedPIR] = []
    for idx, (pir, t_start) in enumerate(runs):
        start = duration.start if idx == 0 else t_start
        end = runs[idx + 1][1] if idx + 1 < len(runs) else duration.end
        out.append(TimedPIR(pir=pir, span=TimeInterval(start, end)))
    return tuple(out)


def track_distance(t1: Track, t2: Track) -> float:
    """Normalized edit distance between the direction sequences."""
    s1, s2 = t1.directions(), t2.directions()
    if not s1 and not s2:
        return 0.0
    m, n = len(s1), len(s2)
    prev = list(range(n + 1))
    for i in range(1, m + 1):
        cur = [i] + [0] * n
        for j in range(1, n + 1):
            sub = prev[j - 1] + (0 if s1[i - 1] is s2[j - 1] else 1)
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, sub)
        prev = cur
    return prev[n] / max(m, n)


def build_scene(
    objects: Sequence[ImageObject],
    samples: Sequence[Sequence[tuple[float, Polygon]]],
    eps_move: float = EPS_MOVE,
) -> Scene:
    """Assemble a scene from synchronized per-object polygon samples.

    Tracks derive from polygon centroids; timelines from pairwise triples.
    Every object must be sampled at the same strictly increasing times.
    """
    if len(objects) != len(samples) or not objects:
        raise ValidationError("need one sample sequence per object")
    reference = [t for t, _ in samples[0]]
    if len(reference) < 2:
        raise InsufficientDataError("scene assembly needs >= 2 sample times")
    for seq in samples[1:]:
        if [t for t, _ in seq] != reference:
            raise AlignmentError("objects must be sampled at identical times")
    duration = TimeInterval(reference[0], reference[-1])
    tracks = tuple(
        derive_track([(t, centroid(poly)) for t, poly in seq], eps_move) for seq in samples
    )
    timelines = tuple(
        derive_timeline(samples[i], samples[j], duration) for i, j in canonical_pairs(len(objects))
    )
    return Scene(objects=tuple(objects), tracks=tracks, timelines=timelines, duration=duration)


def scene_from_dict(doc: dict) -> Scene:
    """Parse the scene input document.

    Same shape as an image annotation, with per-object samples instead of
    one polygon: {"objects": [{"name", "samples": [{"t", "polygon":
    [[x, y], ...]}, ...]}, ...]}. All objects must share their sample
    times.
    """
    from .errors import ParseError

    if not isinstance(doc, dict):
        raise ParseError("scene document must be a JSON object")
    raw_objects = doc.get("objects")
    if not isinstance(raw_objects, list) or not raw_objects:
        raise ParseError("scene document needs a non-empty 'objects' array")
    objects: list[ImageObject] = []
    samples: list[list[tuple[float, Polygon]]] = []
    for idx, entry in enumerate(raw_objects):
        where = f"objects[{idx}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: expected an object")
        name = entry.get("name")
        if not isinstance(name, str) or not name.strip():
            raise ParseError(f"{where}: missing or empty 'name'")
        raw_samples = entry.get("samples")
        if not isinstance(raw_samples, list) or not raw_samples:
            raise ParseError(f"{where}: needs a non-empty 'samples' array")
        seq: list[tuple[float, Polygon]] = []
        for k, sample in enumerate(raw_samples):
            if not isinstance(sample, dict) or "t" not in sample or "polygon" not in sample:
                raise ParseError(f"{where}.samples[{k}]: needs 't' and 'polygon'")
            try:
                seq.append((float(sample["t"]), Polygon.from_coords(sample["polygon"])))
            except (TypeError, ValueError, ValidationError) as exc:
                raise ParseError(f"{where}.samples[{k}]: {exc}") from None
            except DegenerateGeometryError as exc:
                raise ParseError(f"{where}.samples[{k}]: {exc}") from None
        objects.append(ImageObject(name=name, boundary=seq[0][1]))
        samples.append(seq)
    return build_scene(objects, samples)


def _normalized_breaks(timeline: Sequence[TimedPIR], duration: TimeInterval) -> list[tuple[float, PIR]]:
    span = duration.length
    return [((t.span.start - duration.start) / span, t.pir) for t in timeline]


def _timeline_overlap_distance(
    q_timeline: Sequence[TimedPIR],
    q_duration: TimeInterval,
    v_timeline: Sequence[TimedPIR],
    v_duration: TimeInterval,
    weights,
) -> float:
    """Integral of the triple distance over the overlaid unit timelines."""
    qb = _normalized_breaks(q_timeline, q_duration)
    vb = _normalized_breaks(v_timeline, v_duration)
    cuts = sorted({0.0, 1.0, *(p for p, _ in qb), *(p for p, _ in vb)})

    def at(breaks, t):
        current = breaks[0][1]
        for pos, pir in breaks:
            if pos <= t + 1e-12:
                current = pir
            else:
                break
        return current

    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        if hi - lo <= 0:
            continue
        mid = (lo + hi) / 2
        total += (hi - lo) * pir_distance(at(qb, mid), at(vb, mid), weights)
    return total


def scene_similarity(q: Scene, v: Scene, params: MatchParams = DEFAULT_PARAMS,
                     motion_blend: float = 0.5) -> float:
    """Composite moving-scene score in [0, 100].

    coverage * (motion_blend * relation term + (1 - motion_blend) * track
    term): the relation term integrates triple distance over the overlaid
    normalized timelines, the track term averages normalized edit distance
    between matched objects' direction sequences.
    """
    if not (0.0 <= motion_blend <= 1.0):
        raise ValidationError(f"motion_blend must lie in [0,1], got {motion_blend}")

    q_names = [o.name for o in q.objects]
    v_folded = {o.name.casefold(): i for i, o in enumerate(v.objects)}
    matched: list[tuple[int, int]] = []
    used: set[int] = set()
    for qi, name in enumerate(q_names):
        vi = v_folded.get(name.casefold())
        if vi is not None and vi not in used:
            matched.append((qi, vi))
            used.add(vi)
    if not matched:
        return 0.0
    coverage = len(matched) / len(q.objects)

    if len(matched) < 2:
        relation_term = 1.0
    else:
        total = 0.0
        count = 0
        for a in range(len(matched)):
            for b in range(a + 1, len(matched)):
                qi, vi = matched[a]
                qj, vj = matched[b]
                q_tl = q.timeline_between(q_names[qi], q_names[qj])
                v_tl = v.timeline_between(v.objects[vi].name, v.objects[vj].name)
                total += _timeline_overlap_distance(
                    q_tl, q.duration, v_tl, v.duration, params.pir_weights
                )
                count += 1
        relation_term = 1.0 - total / count

    motion_term = 1.0 - sum(
        track_distance(q.tracks[qi], v.tracks[vi]) for qi, vi in matched
    ) / len(matched)

    return 100.0 * coverage * (motion_blend * relation_term + (1.0 - motion_blend) * motion_term)
