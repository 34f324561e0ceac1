#!/usr/bin/env python3
"""Visual attributes: average colour, turning-function shape, texture.

The turning function tracks cumulative boundary turning against
normalized arc length, so it ignores scale and planar rotation; colour
and texture are extracted from raster pixels under the object mask.
"""

import math

import numpy as np

from pirsearch import (
    ColorDescriptor,
    Point,
    Polygon,
    average_color,
    color_distance,
    rectangle,
    shape_descriptor,
    shape_distance,
    texture_descriptor,
)


def regular_polygon(sides, radius=1.0):
    pts = [
        (radius * math.cos(2 * math.pi * k / sides), radius * math.sin(2 * math.pi * k / sides))
        for k in range(sides)
    ]
    return Polygon.from_coords(pts)


def rotated(p, angle):
    c, s = math.cos(angle), math.sin(angle)
    return Polygon(tuple(Point(c * v.x - s * v.y, s * v.x + c * v.y) for v in p.vertices))


square = rectangle(0, 0, 4, 4)
print("shape distances (0 = same outline)")
print(f"  square vs itself:            {shape_distance(shape_descriptor(square), shape_descriptor(square)):.4f}")
print(f"  square vs square x7:         {shape_distance(shape_descriptor(square), shape_descriptor(rectangle(0, 0, 28, 28))):.4f}")
print(f"  square vs square rotated 31°: {shape_distance(shape_descriptor(square), shape_descriptor(rotated(square, 0.54))):.4f}")
print(f"  square vs 64-gon (circle):   {shape_distance(shape_descriptor(square), shape_descriptor(regular_polygon(64))):.4f}")
print(f"  square vs thin 8:1 bar:      {shape_distance(shape_descriptor(square), shape_descriptor(rectangle(0, 0, 8, 1))):.4f}")

print("\ncolour distances (unit cube diagonal = 1)")
print(f"  black vs white: {color_distance(ColorDescriptor((0, 0, 0)), ColorDescriptor((1, 1, 1))):.3f}")
print(f"  red vs green:   {color_distance(ColorDescriptor((1, 0, 0)), ColorDescriptor((0, 1, 0))):.3f}")

print("\nraster extraction over a mask")
h = w = 48
raster = np.zeros((h, w, 3), dtype=np.uint8)
raster[:, :, 2] = 210  # blue backdrop
raster[:, ::3, :] = (200, 40, 40)  # red vertical stripes
mask = rectangle(4, 4, 44, 44)
color = average_color(raster, mask)
texture = texture_descriptor(raster, mask)
print(f"  average colour: ({color.rgb[0]:.2f}, {color.rgb[1]:.2f}, {color.rgb[2]:.2f})")
print(
    "  texture: coarseness {:.2f}, contrast {:.2f}, directionality {:.2f}".format(
        texture.coarseness, texture.contrast, texture.directionality
    )
)

noise = np.random.default_rng(0).integers(0, 256, size=(h, w, 3), dtype=np.uint8)
texture_noise = texture_descriptor(noise, mask)
print(
    "  noise texture: coarseness {:.2f}, contrast {:.2f}, directionality {:.2f}".format(
        texture_noise.coarseness, texture_noise.contrast, texture_noise.directionality
    )
)
