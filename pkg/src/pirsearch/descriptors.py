"""Per-object visual attributes: average colour, turning-function shape,
and a three-axis texture vector (coarseness, contrast, directionality).

Rasters are plain ``(H, W, 3)`` uint8 arrays; polygon masks are given in
model coordinates (+y up), so raster row ``i`` column ``j`` has its pixel
center at model point ``(j + 0.5, H - i - 0.5)``.

All distances are symmetric, lie in [0, 1] and are zero on identical
inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import shapely

from .errors import (
    ConfigurationError,
    DegenerateRegionError,
    InsufficientDataError,
    ValidationError,
)
from .geometry import Polygon, _as_shape

TURNING_SAMPLES = 64

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ColorDescriptor:
    """Average colour, RGB components in [0, 1]."""

    rgb: tuple[float, float, float]

    def __post_init__(self):
        if len(self.rgb) != 3 or any(not (0.0 <= c <= 1.0) for c in self.rgb):
            raise ValidationError(f"rgb components must lie in [0,1], got {self.rgb}")


@dataclass(frozen=True)
class TextureDescriptor:
    """Texture axes (coarseness, contrast, directionality), each in [0, 1]."""

    coarseness: float
    contrast: float
    directionality: float

    def __post_init__(self):
        for name in ("coarseness", "contrast", "directionality"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValidationError(f"texture {name} must lie in [0,1], got {v}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.coarseness, self.contrast, self.directionality)


@dataclass(frozen=True)
class ShapeDescriptor:
    """Sampled cumulative turning function of a closed boundary.

    ``samples`` holds N pairs (arc-length fraction k/N, cumulative turning
    angle in radians accumulated over (0, k/N] of the boundary). Arc-length
    normalization makes the descriptor scale invariant; the start vertex is
    whatever the polygon stores first, which is harmless because the
    distance minimizes over cyclic shifts.
    """

    samples: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.samples) < 8:
            raise ValidationError(f"turning function needs >= 8 samples, got {len(self.samples)}")

    @property
    def n(self) -> int:
        return len(self.samples)

    def angles(self) -> np.ndarray:
        return np.array([a for _, a in self.samples], dtype=float)


def shape_descriptor(p: Polygon, n: int = TURNING_SAMPLES) -> ShapeDescriptor:
    """Turning function of the polygon boundary, resampled at n equal
    arc-length fractions."""
    if n < 8:
        raise ConfigurationError(f"sample count must be >= 8, got {n}")
    verts = p.vertices
    nv = len(verts)

    # Edge lengths and the arc-length position of each turning event.
    lengths = []
    for i in range(nv):
        a, b = verts[i], verts[(i + 1) % nv]
        lengths.append(math.hypot(b.x - a.x, b.y - a.y))
    perimeter = sum(lengths)

    # Exterior angle turned at vertex i (entering from edge i-1, leaving on edge i).
    def exterior_angle(i: int) -> float:
        a = verts[(i - 1) % nv]
        b = verts[i]
        c = verts[(i + 1) % nv]
        v1 = (b.x - a.x, b.y - a.y)
        v2 = (c.x - b.x, c.y - b.y)
        cross = v1[0] * v2[1] - v1[1] * v2[0]
        dot = v1[0] * v2[0] + v1[1] * v2[1]
        return math.atan2(cross, dot)

    # Turning events along the walk from vertex 0: vertex i sits at the end
    # of edges 0..i-1. The final event (back at vertex 0) lands at the full
    # perimeter and closes the total to 2*pi.
    events = []
    pos = 0.0
    for i in range(1, nv):
        pos += lengths[i - 1]
        events.append((pos, exterior_angle(i)))
    events.append((perimeter, exterior_angle(0)))

    total = sum(angle for _, angle in events)
    if abs(total - _TWO_PI) > 1e-6:
        raise ValidationError(f"boundary total turning is {total:.6f}, expected 2*pi")

    samples = []
    cumulative = 0.0
    event_idx = 0
    for k in range(n):
        s = (k / n) * perimeter
        while event_idx < len(events) and events[event_idx][0] <= s + 1e-12 * perimeter:
            cumulative += events[event_idx][1]
            event_idx += 1
        samples.append((k / n, cumulative))
    return ShapeDescriptor(tuple(samples))


def shape_distance(s1: ShapeDescriptor, s2: ShapeDescriptor) -> float:
    """Best cyclic alignment of the two turning functions.

    For every start shift the shifted function is rebased to start at zero
    (adding the 2*pi wrap where needed), both functions are mean-centered
    to cancel the rotation offset, and the RMS difference is taken; the
    minimum over shifts is scaled by the 2*pi ceiling.
    """
    if s1.n != s2.n:
        raise ConfigurationError(f"descriptor sample counts differ: {s1.n} vs {s2.n}")
    n = s1.n
    t1 = s1.angles()
    t2 = s2.angles()

    idx = (np.arange(n)[None, :] + np.arange(n)[:, None]) % n
    wrapped = (np.arange(n)[None, :] + np.arange(n)[:, None]) >= n
    shifted = t1[idx] + _TWO_PI * wrapped  # row j = t1 restarted at sample j
    shifted = shifted - shifted.mean(axis=1, keepdims=True)
    target = t2 - t2.mean()

    rms = np.sqrt(np.mean((shifted - target[None, :]) ** 2, axis=1))
    return float(rms.min() / _TWO_PI)


def _pixel_center_mask(mask: Polygon, height: int, width: int) -> np.ndarray:
    """Boolean (H, W) array marking pixels whose centers fall strictly
    inside the polygon."""
    xs = [v.x for v in mask.vertices]
    ys = [v.y for v in mask.vertices]
    col_lo = max(0, int(math.floor(min(xs) - 0.5)))
    col_hi = min(width, int(math.ceil(max(xs) + 0.5)))
    row_lo = max(0, int(math.floor(height - max(ys) - 0.5)))
    row_hi = min(height, int(math.ceil(height - min(ys) + 0.5)))

    out = np.zeros((height, width), dtype=bool)
    if col_lo >= col_hi or row_lo >= row_hi:
        return out

    cols = np.arange(col_lo, col_hi)
    rows = np.arange(row_lo, row_hi)
    cc, rr = np.meshgrid(cols, rows)
    px = cc + 0.5
    py = height - rr - 0.5
    inside = shapely.contains_xy(_as_shape(mask), px.ravel(), py.ravel()).reshape(rr.shape)
    out[row_lo:row_hi, col_lo:col_hi] = inside
    return out


def average_color(raster: np.ndarray, mask: Polygon) -> ColorDescriptor:
    """Mean RGB over pixels whose centers lie inside the mask polygon."""
    raster = np.asarray(raster)
    if raster.ndim != 3 or raster.shape[2] != 3:
        raise ValidationError(f"raster must be (H, W, 3), got shape {raster.shape}")
    h, w = raster.shape[:2]
    inside = _pixel_center_mask(mask, h, w)
    if not inside.any():
        raise DegenerateRegionError("mask covers no pixel centers")
    mean = raster[inside].mean(axis=0) / 255.0
    return ColorDescriptor(tuple(float(min(1.0, max(0.0, c))) for c in mean))


def _box_mean(gray: np.ndarray, half: int) -> np.ndarray:
    """Mean over a (2*half+1) square window, edge-padded."""
    padded = np.pad(gray, half, mode="edge")
    cs = padded.cumsum(axis=0).cumsum(axis=1)
    cs = np.pad(cs, ((1, 0), (1, 0)))
    size = 2 * half + 1
    h, w = gray.shape
    total = (
        cs[size : size + h, size : size + w]
        - cs[:h, size : size + w]
        - cs[size : size + h, :w]
        + cs[:h, :w]
    )
    return total / (size * size)


_COARSENESS_SCALES = (1, 2, 3, 4, 5)


def texture_descriptor(raster: np.ndarray, mask: Polygon) -> TextureDescriptor:
    """Texture axes of the masked region.

    contrast: gray-level standard deviation scaled by its 0.5 ceiling.
    coarseness: mean best scale of dyadic neighborhood differences,
    mapped from scale index 1..5 onto [0, 1].
    directionality: 1 minus the normalized entropy of a 16-bin histogram
    of gradient orientations (mod pi), so a single dominant orientation
    scores near 1 and isotropic noise near 0.
    """
    raster = np.asarray(raster)
    if raster.ndim != 3 or raster.shape[2] != 3:
        raise ValidationError(f"raster must be (H, W, 3), got shape {raster.shape}")
    h, w = raster.shape[:2]
    inside = _pixel_center_mask(mask, h, w)
    if not inside.any():
        raise DegenerateRegionError("mask covers no pixel centers")
    rows, cols = np.nonzero(inside)
    if rows.max() - rows.min() + 1 < 8 or cols.max() - cols.min() + 1 < 8:
        raise InsufficientDataError("texture region must span at least 8x8 pixels")

    r0, r1 = rows.min(), rows.max() + 1
    c0, c1 = cols.min(), cols.max() + 1
    gray = raster[r0:r1, c0:c1].mean(axis=2) / 255.0
    region = inside[r0:r1, c0:c1]

    contrast = min(1.0, float(gray[region].std() / 0.5))

    # Best dyadic scale per pixel: largest average difference between
    # opposite window neighbors, horizontally or vertically.
    best_energy = np.full(gray.shape, -1.0)
    best_scale = np.ones(gray.shape)
    for k in _COARSENESS_SCALES:
        half = 2 ** (k - 1)
        avg = _box_mean(gray, half)
        eh = np.abs(np.roll(avg, -half, axis=1) - np.roll(avg, half, axis=1))
        ev = np.abs(np.roll(avg, -half, axis=0) - np.roll(avg, half, axis=0))
        energy = np.maximum(eh, ev)
        better = energy > best_energy + 1e-12
        best_energy[better] = energy[better]
        best_scale[better] = k
    coarseness = float((best_scale[region].mean() - 1.0) / (len(_COARSENESS_SCALES) - 1))
    coarseness = min(1.0, max(0.0, coarseness))

    gy, gx = np.gradient(gray)
    magnitude = np.hypot(gx, gy)
    oriented = region & (magnitude > 1e-8)
    if not oriented.any():
        directionality = 0.0
    else:
        theta = np.arctan2(gy[oriented], gx[oriented]) % math.pi
        hist, _ = np.histogram(theta, bins=16, range=(0.0, math.pi))
        probs = hist / hist.sum()
        nonzero = probs[probs > 0]
        entropy = float(-(nonzero * np.log(nonzero)).sum())
        directionality = min(1.0, max(0.0, 1.0 - entropy / math.log(16)))

    return TextureDescriptor(coarseness, contrast, directionality)


_SPACE_DIAGONAL = math.sqrt(3.0)


def color_distance(c1: ColorDescriptor, c2: ColorDescriptor) -> float:
    """Euclidean RGB distance scaled by the unit-cube diagonal."""
    d = math.dist(c1.rgb, c2.rgb) / _SPACE_DIAGONAL
    return min(1.0, d)


def texture_distance(t1: TextureDescriptor, t2: TextureDescriptor) -> float:
    """Euclidean distance in the texture cube scaled by its diagonal."""
    d = math.dist(t1.as_tuple(), t2.as_tuple()) / _SPACE_DIAGONAL
    return min(1.0, d)
