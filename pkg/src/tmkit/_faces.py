"""Dart-orbit face tracing for combinatorial embeddings.

A rotation system lists, for every vertex, its neighbors in
counter-clockwise drawing order.  Faces are the orbits of the dart
permutation (u,v) -> (v, w) where w precedes u in the rotation at v;
with CCW rotations this walks every face with the face on the dart's
left, so each inner face appears once as a CCW orbit and the outer face
once as a CW orbit.
"""

from __future__ import annotations

import math
from typing import Dict, List, Sequence, Tuple

from .core import Graph

Dart = Tuple[int, int]
Rotation = Dict[int, Tuple[int, ...]]


def rotation_from_coords(g: Graph, coords: Dict[int, Tuple[float, float]]) -> Rotation:
    """CCW rotation system induced by a straight-line drawing."""
    rot = {}
    for v in g.vertices():
        x, y = coords[v]
        rot[v] = tuple(
            sorted(g.neighbors(v), key=lambda w: math.atan2(coords[w][1] - y, coords[w][0] - x))
        )
    return rot


def trace_faces(g: Graph, rotation: Rotation) -> List[Tuple[Dart, ...]]:
    """All face orbits; each dart (u,v) belongs to exactly one orbit."""
    index: Dict[Dart, int] = {}
    for v, nbrs in rotation.items():
        for i, w in enumerate(nbrs):
            index[(v, w)] = i
    faces: List[Tuple[Dart, ...]] = []
    seen = set()
    for start in sorted(index):
        if start in seen:
            continue
        orbit = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            orbit.append(dart)
            u, v = dart
            nbrs = rotation[v]
            dart = (v, nbrs[(index[(v, u)] - 1) % len(nbrs)])
        faces.append(tuple(orbit))
    return faces


def face_vertices(face: Sequence[Dart]) -> Tuple[int, ...]:
    return tuple(u for u, _ in face)


def largest_face_index(faces: List[Tuple[Dart, ...]]) -> int:
    """Index of the longest orbit; the outer face for convex lattice drawings."""
    return max(range(len(faces)), key=lambda i: (len(faces[i]), -i))
