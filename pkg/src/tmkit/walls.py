"""Grids, elementary walls, and their certificates.

The elementary wall of height h and width r is carved out of the
h x 2r grid: in odd columns the even-indexed column edges are deleted,
in even columns the odd-indexed ones, then every vertex that ended up
with degree one is removed (one simultaneous pass).  Pegs are the
degree-2 vertices on the outer boundary cycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from ._faces import face_vertices, largest_face_index, rotation_from_coords, trace_faces
from .core import Edge, Graph, verify_minor_model, verify_subdivision

Coord = Tuple[int, int]


def grid_index(a: int, b: int, i: int, j: int) -> int:
    """Row-major vertex id of grid position (i, j), zero-based."""
    return i * b + j


def generate_grid(a: int, b: int) -> Graph:
    """The a x b grid: unit-distance edges on an a-by-b array of vertices."""
    if a < 1 or b < 1:
        raise ValueError("grid dimensions must be positive")
    edges = []
    for i in range(a):
        for j in range(b):
            if j + 1 < b:
                edges.append((grid_index(a, b, i, j), grid_index(a, b, i, j + 1)))
            if i + 1 < a:
                edges.append((grid_index(a, b, i, j), grid_index(a, b, i + 1, j)))
    return Graph(a * b, edges)


def grid_coords(a: int, b: int) -> Dict[int, Coord]:
    """Drawing coordinates (x right, y up) for the row-major grid."""
    return {grid_index(a, b, i, j): (j, a - 1 - i) for i in range(a) for j in range(b)}


@dataclass(frozen=True)
class Wall:
    """A subdivision of an elementary wall, with its certificate.

    ``branch_map`` sends base (elementary-wall) vertices to host vertices
    and ``paths`` sends base edges to host paths, witnessing that the host
    graph is exactly a subdivision of the base.  ``coords`` places the base
    vertices in the originating h x 2r grid.
    """

    graph: Graph
    height: int
    width: int
    pegs: FrozenSet[int]
    peg_order: Tuple[int, ...]
    base: Graph
    branch_map: Mapping[int, int]
    paths: Mapping[Edge, Tuple[int, ...]]
    base_coords: Mapping[int, Coord]

    def validate(self) -> bool:
        paths = {e: list(p) for e, p in self.paths.items()}
        return verify_subdivision(self.base, self.graph, dict(self.branch_map), paths)


def _wall_kept_structure(h: int, r: int):
    """Kept vertices/edges of the h x 2r grid after the wall carving."""
    cols = 2 * r

    def col_edge_present(i: int, j: int) -> bool:
        # Edge between rows i and i+1 in column j (all 1-based).
        return (i % 2 == 1) == (j % 2 == 1)

    deleted = {(1, cols)}
    deleted.add((h, 1) if h % 2 == 1 else (h, cols))

    verts = [(i, j) for i in range(1, h + 1) for j in range(1, cols + 1) if (i, j) not in deleted]
    edges = []
    for i, j in verts:
        if (i, j + 1) in set(verts) and j + 1 <= cols:
            edges.append(((i, j), (i, j + 1)))
        if (i + 1, j) in set(verts) and i + 1 <= h and col_edge_present(i, j):
            edges.append(((i, j), (i + 1, j)))
    return verts, edges


def generate_elementary_wall(h: int, r: int) -> Wall:
    """The elementary wall of height h and width r (h >= 2, r >= 1)."""
    if h < 2:
        raise ValueError("wall height must be at least 2")
    if r < 1:
        raise ValueError("wall width must be at least 1")
    verts, edges = _wall_kept_structure(h, r)
    vid = {pos: k for k, pos in enumerate(sorted(verts))}
    g = Graph(len(verts), [(vid[a], vid[b]) for a, b in edges])

    coords = {vid[(i, j)]: (j - 1, h - i) for (i, j) in verts}
    peg_order = _outer_cycle(g, coords)
    pegs = frozenset(v for v in peg_order if g.degree(v) == 2)

    base_coords = {vid[pos]: pos for pos in verts}
    return Wall(
        graph=g,
        height=h,
        width=r,
        pegs=pegs,
        peg_order=tuple(v for v in peg_order if v in pegs),
        base=g,
        branch_map={v: v for v in g.vertices()},
        paths={e: e for e in g.edges},
        base_coords=base_coords,
    )


def _outer_cycle(g: Graph, coords: Dict[int, Coord]) -> Tuple[int, ...]:
    """Outer boundary cycle of a lattice drawing; empty if the graph is acyclic."""
    if g.m < 3:
        return ()
    rot = rotation_from_coords(g, coords)
    faces = trace_faces(g, rot)
    outer = faces[largest_face_index(faces)]
    cycle = face_vertices(outer)
    if len(set(cycle)) != len(cycle):  # acyclic pieces traverse darts twice
        return ()
    return cycle


def wall_drawing_coords(w: Wall) -> Dict[int, Coord]:
    """Lattice coordinates for an elementary wall's drawing (x right, y up)."""
    return {v: (pos[1] - 1, w.height - pos[0]) for v, pos in w.base_coords.items()}


def wall_in_grid(h: int, r: int) -> Tuple[Graph, Dict[str, object]]:
    """The h x 2r grid plus a subgraph certificate for its elementary wall.

    The certificate holds the wall's vertex and edge subsets inside the
    grid and the subdivision witness back to the freshly built wall.
    """
    if h < 2:
        raise ValueError("wall height must be at least 2")
    grid = generate_grid(h, 2 * r)
    verts, edges = _wall_kept_structure(h, r)
    to_grid = {
        (i, j): grid_index(h, 2 * r, i - 1, j - 1) for i in range(1, h + 1) for j in range(1, 2 * r + 1)
    }
    vert_ids = sorted(to_grid[pos] for pos in verts)
    edge_ids = sorted(
        tuple(sorted((to_grid[a], to_grid[b]))) for a, b in edges
    )
    wall = generate_elementary_wall(h, r)
    # Base wall vertex -> grid vertex, matching sorted (i, j) order on both sides.
    base_to_grid = {}
    for pos, base_v in ((pos, k) for k, pos in enumerate(sorted(verts))):
        base_to_grid[base_v] = to_grid[pos]
    certificate = {
        "vertices": vert_ids,
        "edges": edge_ids,
        "branch_map": base_to_grid,
        "wall": wall,
    }
    return grid, certificate


def verify_wall_in_grid(grid: Graph, certificate: Dict[str, object]) -> bool:
    """Check a wall-in-grid certificate against the subdivision validator."""
    wall: Wall = certificate["wall"]  # type: ignore[assignment]
    branch_map: Dict[int, int] = certificate["branch_map"]  # type: ignore[assignment]
    vert_ids = set(certificate["vertices"])  # type: ignore[arg-type]
    edge_ids = {tuple(e) for e in certificate["edges"]}  # type: ignore[union-attr]
    if not all(0 <= v < grid.n for v in vert_ids):
        return False
    if not all(e in grid.edges for e in edge_ids):
        return False
    sub = Graph(grid.n, edge_ids)
    host, remap = sub.subgraph(vert_ids)
    mapped = {bv: remap[gv] for bv, gv in branch_map.items()}
    paths = {e: (mapped[e[0]], mapped[e[1]]) for e in wall.base.edges}
    return verify_subdivision(wall.base, host, mapped, paths)


def grid_minor_of_wall(w: Wall) -> Dict[int, FrozenSet[int]]:
    """A minor model of the h x r grid inside the wall graph.

    Branch sets pair the two grid columns 2k-1, 2k of each row; the wall's
    alternating column edges guarantee vertical adjacency, the row edges
    horizontal adjacency.  Subdivision vertices of the host wall are
    absorbed into the branch set of the lower-indexed base endpoint.
    """
    h, r = w.height, w.width
    pos_of = {pos: bv for bv, pos in w.base_coords.items()}
    sets: Dict[int, set] = {}
    owner: Dict[int, int] = {}
    for i in range(1, h + 1):
        for k in range(1, r + 1):
            gv = (i - 1) * r + (k - 1)
            members = set()
            for j in (2 * k - 1, 2 * k):
                if (i, j) in pos_of:
                    bv = pos_of[(i, j)]
                    members.add(w.branch_map[bv])
                    owner[bv] = gv
            sets[gv] = members
    # Absorb host subdivision vertices into the branch set of the base edge's
    # smaller endpoint (its owner grid vertex keeps the set connected because
    # the path reaches that endpoint's image).
    for e, path in w.paths.items():
        interior = list(path)[1:-1]
        if not interior:
            continue
        a = min(e)
        sets[owner[a]].update(interior)
    return {gv: frozenset(s) for gv, s in sets.items()}


def verify_grid_minor_of_wall(w: Wall, model: Mapping[int, FrozenSet[int]]) -> bool:
    pattern = generate_grid(w.height, w.width)
    return verify_minor_model(w.graph, pattern, model)


def subdivide_wall(w: Wall, times: int = 1) -> Wall:
    """Wall with every host edge subdivided ``times`` times (fresh ids)."""
    if times < 0:
        raise ValueError("times must be non-negative")
    g = w.graph
    n = g.n
    edges: List[Edge] = []
    new_paths: Dict[Edge, Tuple[int, ...]] = {}
    host_path: Dict[Edge, List[int]] = {}
    for e in sorted(g.edges):
        chain = [e[0]] + [n + i for i in range(times)] + [e[1]]
        n += times
        edges.extend((chain[i], chain[i + 1]) for i in range(len(chain) - 1))
        host_path[e] = chain
    big = Graph(n, edges)
    for be, path in w.paths.items():
        path = list(path)
        full: List[int] = [path[0]]
        for a, b in zip(path, path[1:]):
            chain = host_path.get((a, b) if a < b else (b, a))
            seg = chain if chain[0] == a else list(reversed(chain))
            full.extend(seg[1:])
        new_paths[be] = tuple(full)
    return Wall(
        graph=big,
        height=w.height,
        width=w.width,
        pegs=w.pegs,
        peg_order=w.peg_order,
        base=w.base,
        branch_map=dict(w.branch_map),
        paths=new_paths,
        base_coords=dict(w.base_coords),
    )


def centered_subwall(w: Wall, side: int) -> Wall:
    """The centered side x side subwall of a square elementary wall.

    Rows and columns are taken from the middle; on even leftovers the
    window shifts toward the top-left.  Only unsubdivided square walls are
    supported (chain construction works on those).
    """
    if w.height != w.width:
        raise ValueError("centered_subwall expects a square wall")
    if w.graph is not w.base and w.graph != w.base:
        raise ValueError("centered_subwall expects an unsubdivided wall")
    if side > w.height or side < 2:
        raise ValueError("subwall side out of range")
    row0 = (w.height - side) // 2  # 0-based offset of the window
    col0 = 2 * ((w.width - side) // 2)
    # Keep the brick pattern aligned: the window must start on an odd grid
    # column (1-based) so the carving pattern of the subwall matches.
    if col0 % 2 == 1:
        col0 -= 1
    sub = generate_elementary_wall(side, side)
    # Match subwall base coords (i, j) to parent coords (i + row0, j + col0).
    parent_at = {pos: v for v, pos in w.base_coords.items()}
    mapping: Dict[int, int] = {}
    for sv, (i, j) in sub.base_coords.items():
        parent_pos = (i + row0, j + col0)
        if parent_pos not in parent_at:
            raise ValueError(f"subwall position {parent_pos} missing in parent wall")
        mapping[sv] = parent_at[parent_pos]
    for a, b in sub.base.edges:
        pa, pb = mapping[a], mapping[b]
        if not w.base.has_edge(pa, pb):
            raise ValueError("subwall edge missing in parent wall")
    return Wall(
        graph=sub.graph,
        height=side,
        width=side,
        pegs=sub.pegs,
        peg_order=sub.peg_order,
        base=sub.base,
        branch_map={sv: mapping[sv] for sv in sub.base.vertices()},
        paths={e: (mapping[e[0]], mapping[e[1]]) for e in sub.base.edges},
        base_coords=dict(sub.base_coords),
    )
