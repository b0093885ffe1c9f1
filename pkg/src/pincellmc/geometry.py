"""Pincell geometry: concentric infinite cylinders in a reflective square.

Regions are numbered from the axis outward with half-open radial intervals
``[r_i, r_{i+1})``; region ``len(radii)`` is everything between the last
cylinder and the box.  Surfaces are numbered ``0..nc-1`` for cylinders and
``nc + {0, 1, 2, 3}`` for the ``-x, +x, -y, +y`` box faces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numba
import numpy as np

__all__ = ["Pincell", "GeomData", "GeometryError", "NUDGE", "VERA_RADII", "VERA_PITCH"]

VERA_RADII = (0.4096, 0.418, 0.475)
VERA_PITCH = 1.26

# distance a particle is pushed past a surface after crossing it (cm)
NUDGE = 1.0e-6

FACE_XMIN, FACE_XMAX, FACE_YMIN, FACE_YMAX = 0, 1, 2, 3


class GeometryError(ValueError):
    pass


class GeomData(NamedTuple):
    half_pitch: float
    radii: np.ndarray
    region_mat: np.ndarray


@numba.njit(nogil=True, cache=True)
def locate_kernel(g, x, y):
    r2 = x * x + y * y
    nc = g.radii.size
    for i in range(nc):
        if r2 < g.radii[i] * g.radii[i]:
            return i
    return nc


@numba.njit(nogil=True, cache=True)
def _cylinder_distance(x, y, u, v, r, inside):
    a = u * u + v * v
    if a == 0.0:
        return np.inf
    b = x * u + y * v
    c = x * x + y * y - r * r
    disc = b * b - a * c
    if inside:
        if disc < 0.0:
            disc = 0.0
        d = (-b + math.sqrt(disc)) / a
        return d if d > 0.0 else 0.0
    if b >= 0.0 or disc <= 0.0:
        return np.inf
    d = (-b - math.sqrt(disc)) / a
    return d if d > 0.0 else 0.0


@numba.njit(nogil=True, cache=True)
def distance_kernel(g, region, x, y, u, v):
    """Distance to the nearest surface of ``region`` and the surface id."""
    nc = g.radii.size
    best = np.inf
    surf = -1
    if region > 0:
        d = _cylinder_distance(x, y, u, v, g.radii[region - 1], False)
        if d < best:
            best = d
            surf = region - 1
    if region < nc:
        d = _cylinder_distance(x, y, u, v, g.radii[region], True)
        if d < best:
            best = d
            surf = region
        return best, surf
    h = g.half_pitch
    if u > 0.0:
        d = max((h - x) / u, 0.0)
        if d < best:
            best = d
            surf = nc + FACE_XMAX
    elif u < 0.0:
        d = max((-h - x) / u, 0.0)
        if d < best:
            best = d
            surf = nc + FACE_XMIN
    if v > 0.0:
        d = max((h - y) / v, 0.0)
        if d < best:
            best = d
            surf = nc + FACE_YMAX
    elif v < 0.0:
        d = max((-h - y) / v, 0.0)
        if d < best:
            best = d
            surf = nc + FACE_YMIN
    return best, surf


@numba.njit(nogil=True, cache=True)
def reflect_kernel(face, u, v, w):
    if face == FACE_XMIN or face == FACE_XMAX:
        return -u, v, w
    return u, -v, w


@numba.njit(nogil=True, cache=True)
def cross_kernel(g, surf, x, y, z, u, v, w):
    """Apply a surface crossing at ``(x, y)`` already on ``surf``.

    Returns the nudged position, possibly reflected direction and new region.
    """
    nc = g.radii.size
    h = g.half_pitch
    if surf >= nc:
        face = surf - nc
        if face == FACE_XMIN:
            x = -h
        elif face == FACE_XMAX:
            x = h
        elif face == FACE_YMIN:
            y = -h
        else:
            y = h
        u, v, w = reflect_kernel(face, u, v, w)
        # corner hits: also mirror the other axis if it points outward
        if (x >= h and u > 0.0) or (x <= -h and u < 0.0):
            u = -u
        if (y >= h and v > 0.0) or (y <= -h and v < 0.0):
            v = -v
    x += NUDGE * u
    y += NUDGE * v
    z += NUDGE * w
    x = min(max(x, -h), h)
    y = min(max(y, -h), h)
    return x, y, z, u, v, w, locate_kernel(g, x, y)


@dataclass(frozen=True)
class Pincell:
    """Nested cylinders (radii in cm, innermost first) in a square cell."""

    pitch: float = VERA_PITCH
    radii: tuple = VERA_RADII
    region_materials: tuple = (0, 1, 2, 3)
    data: GeomData = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "region_materials", tuple(int(m) for m in self.region_materials))
        if not self.pitch > 0:
            raise GeometryError("pitch must be positive")
        prev = 0.0
        for r in radii:
            if not r > prev:
                raise GeometryError(f"radii must be positive and strictly increasing: {radii}")
            prev = r
        if radii and not radii[-1] < self.pitch / 2:
            raise GeometryError(f"outer radius {radii[-1]} does not fit in pitch {self.pitch}")
        if len(self.region_materials) != len(radii) + 1:
            raise GeometryError(
                f"need {len(radii) + 1} region materials for {len(radii)} cylinders, "
                f"got {len(self.region_materials)}"
            )
        if any(m < 0 for m in self.region_materials):
            raise GeometryError("region material ids must be non-negative")
        object.__setattr__(
            self,
            "data",
            GeomData(
                float(self.pitch / 2),
                np.array(radii, dtype=np.float64),
                np.array(self.region_materials, dtype=np.int32),
            ),
        )

    @property
    def n_regions(self):
        return len(self.radii) + 1

    def inside(self, position):
        h = self.pitch / 2
        return abs(position[0]) <= h and abs(position[1]) <= h

    def locate(self, position):
        """Region index of ``position`` (z is ignored)."""
        if not self.inside(position):
            raise GeometryError(f"position {tuple(position)} outside the cell")
        return int(locate_kernel(self.data, float(position[0]), float(position[1])))

    def distance_to_boundary(self, position, direction):
        """``(distance, surface)`` along ``direction`` from ``position``.

        A purely axial direction never meets a surface: ``(inf, -1)``.
        """
        if abs(math.sqrt(sum(c * c for c in direction)) - 1.0) > 1e-6:
            raise GeometryError("direction must be a unit vector")
        region = self.locate(position)
        d, s = distance_kernel(
            self.data, region, float(position[0]), float(position[1]),
            float(direction[0]), float(direction[1]),
        )
        return float(d), int(s)

    def is_face(self, surface):
        return surface >= len(self.radii)

    def reflect(self, direction, surface):
        """Specular reflection of ``direction`` off box face ``surface``."""
        if not self.is_face(surface):
            raise GeometryError(f"surface {surface} is a cylinder, not a box face")
        return tuple(float(c) for c in reflect_kernel(surface - len(self.radii), *map(float, direction)))
