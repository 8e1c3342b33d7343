"""Immutable graph and rooted-graph values.

Vertices are dense integers ``0..n-1``.  Deleting vertices produces a new
graph together with an explicit old->new renaming map; nothing is ever
mutated in place, so every value here is safe to share across threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .limits import DEFAULT_LIMITS, Limits

Edge = Tuple[int, int]


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected simple graph: no loops, no multi-edges, no labels."""

    __slots__ = ("n", "edges", "_adj", "_adj_mask")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        es = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            es.add(_norm_edge(u, v))
        self.n = n
        self.edges: FrozenSet[Edge] = frozenset(es)
        adj: List[List[int]] = [[] for _ in range(n)]
        for u, v in es:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._adj_mask = tuple(sum(1 << w for w in a) for a in self._adj)

    # -- basic queries -------------------------------------------------

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adj[v]

    def neighbor_mask(self, v: int) -> int:
        return self._adj_mask[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # -- derived graphs ------------------------------------------------

    def add_edges(self, extra: Iterable[Edge]) -> "Graph":
        return Graph(self.n, list(self.edges) + list(extra))

    def delete_vertices(self, doomed: Iterable[int]) -> Tuple["Graph", Dict[int, int]]:
        """Remove vertices; returns the new graph and the old->new map."""
        dead = set(doomed)
        keep = [v for v in range(self.n) if v not in dead]
        remap = {old: new for new, old in enumerate(keep)}
        edges = [(remap[u], remap[v]) for u, v in self.edges if u not in dead and v not in dead]
        return Graph(len(keep), edges), remap

    def subgraph(self, vertices: Iterable[int]) -> Tuple["Graph", Dict[int, int]]:
        """Induced subgraph on ``vertices``; returns graph + old->new map."""
        keep = sorted(set(vertices))
        remap = {old: new for new, old in enumerate(keep)}
        edges = [(remap[u], remap[v]) for u, v in self.edges if u in remap and v in remap]
        return Graph(len(keep), edges), remap

    def edge_subgraph(self, edges: Iterable[Edge]) -> "Graph":
        """Subgraph on the same vertex set keeping only the given edges."""
        es = {_norm_edge(u, v) for u, v in edges}
        missing = es - self.edges
        if missing:
            raise ValueError(f"edges not in graph: {sorted(missing)}")
        return Graph(self.n, es)

    def connected_components(self) -> List[List[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = [s]
            seen[s] = True
            stack = [s]
            while stack:
                v = stack.pop()
                for w in self._adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected_subset(self, vertices: Iterable[int]) -> bool:
        vs = set(vertices)
        if not vs:
            return False
        start = next(iter(vs))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in self._adj[v]:
                if w in vs and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == vs


class RootedGraph:
    """Graph with injectively labelled root vertices.

    ``roots`` maps root vertex -> positive integer label; distinct roots
    carry distinct labels.  Non-roots are unlabelled.
    """

    __slots__ = ("graph", "roots")

    def __init__(self, graph: Graph, roots: Optional[Mapping[int, int]] = None):
        roots = dict(roots or {})
        for v, lab in roots.items():
            if not (0 <= v < graph.n):
                raise ValueError(f"root {v} out of range")
            if lab <= 0:
                raise ValueError(f"root label {lab} must be positive")
        if len(set(roots.values())) != len(roots):
            raise ValueError("root labels must be injective")
        self.graph = graph
        self.roots: Dict[int, int] = roots

    @property
    def n(self) -> int:
        return self.graph.n

    def label_set(self) -> FrozenSet[int]:
        return frozenset(self.roots.values())

    def vertex_of_label(self, label: int) -> int:
        for v, lab in self.roots.items():
            if lab == label:
                return v
        raise KeyError(label)

    def delete_vertices(self, doomed: Iterable[int]) -> Tuple["RootedGraph", Dict[int, int]]:
        g, remap = self.graph.delete_vertices(doomed)
        roots = {remap[v]: lab for v, lab in self.roots.items() if v in remap}
        return RootedGraph(g, roots), remap

    def with_roots(self, roots: Mapping[int, int]) -> "RootedGraph":
        return RootedGraph(self.graph, roots)

    def union_on_roots(self, label_edges: Iterable[Tuple[int, int]]) -> "RootedGraph":
        """Add, for each label pair, the edge between the corresponding roots."""
        by_label = {lab: v for v, lab in self.roots.items()}
        extra = []
        for a, b in label_edges:
            e = _norm_edge(by_label[a], by_label[b])
            if e not in self.graph.edges:
                extra.append(e)
        return RootedGraph(self.graph.add_edges(extra), self.roots)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RootedGraph)
            and self.graph == other.graph
            and self.roots == other.roots
        )

    def __hash__(self) -> int:
        return hash((self.graph, tuple(sorted(self.roots.items()))))

    def __repr__(self) -> str:
        return f"RootedGraph(n={self.n}, m={self.graph.m}, roots={self.roots})"


# ---------------------------------------------------------------------------
# Separations and replacement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Separation:
    """A pair of edge-disjoint subgraphs covering the parent graph.

    The two sides share only interface vertices; ``order`` is the size of
    that interface.
    """

    parent: RootedGraph
    left_vertices: FrozenSet[int]
    left_edges: FrozenSet[Edge]
    right_vertices: FrozenSet[int]
    right_edges: FrozenSet[Edge]

    def __post_init__(self):
        g = self.parent.graph
        if self.left_vertices | self.right_vertices != set(g.vertices()):
            raise ValueError("separation sides must cover all vertices")
        if self.left_edges & self.right_edges:
            raise ValueError("separation sides must be edge-disjoint")
        if self.left_edges | self.right_edges != g.edges:
            raise ValueError("separation sides must cover all edges")
        for u, v in self.left_edges:
            if u not in self.left_vertices or v not in self.left_vertices:
                raise ValueError("left edge with endpoint outside left side")
        for u, v in self.right_edges:
            if u not in self.right_vertices or v not in self.right_vertices:
                raise ValueError("right edge with endpoint outside right side")

    @property
    def interface(self) -> FrozenSet[int]:
        return self.left_vertices & self.right_vertices

    @property
    def order(self) -> int:
        return len(self.interface)

    @staticmethod
    def from_left_vertices(
        parent: RootedGraph,
        left_vertices: Iterable[int],
        interface: Iterable[int],
    ) -> "Separation":
        """Separation whose left side is ``left_vertices`` (interface included).

        Edges inside the left side, including interface-internal edges, go
        left; everything else goes right.
        """
        lv = frozenset(left_vertices) | frozenset(interface)
        g = parent.graph
        le = frozenset(e for e in g.edges if e[0] in lv and e[1] in lv)
        rv = frozenset(set(g.vertices()) - lv) | frozenset(interface)
        re = frozenset(g.edges - le)
        return Separation(parent, lv, le, rv, re)

    def left_rooted(self) -> RootedGraph:
        """Left side as a rooted graph inheriting the parent's root labels."""
        keep = sorted(self.left_vertices)
        remap = {old: new for new, old in enumerate(keep)}
        edges = [(remap[u], remap[v]) for u, v in self.left_edges]
        roots = {remap[v]: lab for v, lab in self.parent.roots.items() if v in remap}
        return RootedGraph(Graph(len(keep), edges), roots)


def replace(sep: Separation, left_replacement: RootedGraph) -> RootedGraph:
    """Swap the left side of a separation for a compatible rooted graph.

    The interface must consist of parent roots; ``left_replacement`` must
    carry exactly the same label set as the left side's inherited roots.
    Interface identification goes through labels: an edge of the right side
    from interface vertex ``u`` re-attaches to the replacement vertex whose
    label matches ``u``'s.
    """
    parent = sep.parent
    iface = sep.interface
    if not iface <= set(parent.roots):
        raise ValueError("interface vertices must all be parent roots")
    left_roots = {v: parent.roots[v] for v in sep.left_vertices if v in parent.roots}
    if frozenset(left_replacement.roots.values()) != frozenset(left_roots.values()):
        raise ValueError("replacement root labels incompatible with left side")

    # New vertex ids: replacement vertices first, then right-side vertices
    # that are not interface vertices.
    rep_n = left_replacement.n
    right_only = sorted(sep.right_vertices - sep.left_vertices)
    new_id: Dict[int, int] = {old: rep_n + i for i, old in enumerate(right_only)}

    label_to_rep = {lab: v for v, lab in left_replacement.roots.items()}

    edges: List[Edge] = list(left_replacement.graph.edges)
    for u, v in sep.right_edges:
        u_if, v_if = u in iface, v in iface
        if u_if and v_if:
            continue  # interface-internal edges belong to the left side
        if not u_if and not v_if:
            edges.append((new_id[u], new_id[v]))
        else:
            r, w = (u, v) if u_if else (v, u)
            edges.append((label_to_rep[parent.roots[r]], new_id[w]))

    n = rep_n + len(right_only)
    roots: Dict[int, int] = dict(left_replacement.roots)
    for v, lab in parent.roots.items():
        if v in new_id:  # roots strictly on the right keep their labels
            roots[new_id[v]] = lab
    return RootedGraph(Graph(n, edges), roots)


# ---------------------------------------------------------------------------
# Patterns, folios
# ---------------------------------------------------------------------------


def isolated_count(g: Graph) -> int:
    """Number of degree-zero vertices (root or not)."""
    return sum(1 for v in g.vertices() if g.degree(v) == 0)


def pattern_detail(rg: RootedGraph) -> int:
    return rg.graph.m + isolated_count(rg.graph)


@dataclass(frozen=True)
class Pattern:
    """A rooted pattern graph together with its detail budget.

    The detail of the pattern (edge count plus number of isolated
    vertices) never exceeds the budget.
    """

    rooted: RootedGraph
    delta: int

    def __post_init__(self):
        if self.delta < 1:
            raise ValueError("detail budget must be positive")
        if pattern_detail(self.rooted) > self.delta:
            raise ValueError(
                f"pattern detail {pattern_detail(self.rooted)} exceeds budget {self.delta}"
            )

    @property
    def graph(self) -> Graph:
        return self.rooted.graph

    @property
    def roots(self) -> Dict[int, int]:
        return self.rooted.roots

    def canonical(self) -> bytes:
        return canonical_form(self.rooted)


class Folio:
    """Canonical set of patterns, deduplicated up to rooted isomorphism."""

    __slots__ = ("_by_canon",)

    def __init__(self, patterns: Iterable[RootedGraph] = ()):
        self._by_canon: Dict[bytes, RootedGraph] = {}
        for p in patterns:
            self._by_canon.setdefault(canonical_form(p), p)

    def keys(self) -> FrozenSet[bytes]:
        return frozenset(self._by_canon)

    def members(self) -> List[RootedGraph]:
        return [self._by_canon[k] for k in sorted(self._by_canon)]

    def __len__(self) -> int:
        return len(self._by_canon)

    def __contains__(self, item) -> bool:
        if isinstance(item, bytes):
            return item in self._by_canon
        if isinstance(item, RootedGraph):
            return canonical_form(item) in self._by_canon
        if isinstance(item, Pattern):
            return canonical_form(item.rooted) in self._by_canon
        return False

    def __eq__(self, other) -> bool:
        return isinstance(other, Folio) and self.keys() == other.keys()

    def __hash__(self) -> int:
        return hash(self.keys())

    def __repr__(self) -> str:
        return f"Folio({len(self)} patterns)"

    def to_sorted_hex(self) -> List[str]:
        return [k.hex() for k in sorted(self._by_canon)]


def all_graphs_on_labels(labels: Iterable[int]) -> List[FrozenSet[Tuple[int, int]]]:
    """Every graph on the given label set, as frozensets of label pairs.

    There are exactly ``2^(len(labels) choose 2)`` of them.
    """
    labs = sorted(labels)
    slots = [(a, b) for i, a in enumerate(labs) for b in labs[i + 1 :]]
    out = []
    for r in range(len(slots) + 1):
        for combo in itertools.combinations(slots, r):
            out.append(frozenset(combo))
    return out


class ExtendedFolio:
    """Map from each graph on the root labels to the folio of G with that
    graph overlaid on its roots."""

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping[FrozenSet[Tuple[int, int]], Folio]):
        self.entries: Dict[FrozenSet[Tuple[int, int]], Folio] = dict(entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtendedFolio) and self.entries == other.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, key: FrozenSet[Tuple[int, int]]) -> Folio:
        return self.entries[key]

    def __repr__(self) -> str:
        return f"ExtendedFolio({len(self.entries)} entries)"

    def to_jsonable(self) -> Dict[str, List[str]]:
        out = {}
        for key, folio in self.entries.items():
            name = ";".join(f"{a}-{b}" for a, b in sorted(key)) or "-"
            out[name] = folio.to_sorted_hex()
        return out


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------


def canonical_form(rg: RootedGraph, limits: Limits = DEFAULT_LIMITS) -> bytes:
    """Canonical byte string, equal iff root-label-preserving isomorphic.

    Roots are pinned by their labels (labels are injective, so a root can
    only map to the same-labelled root).  Non-roots are permuted
    exhaustively within refinement cells, taking the lexicographically
    smallest adjacency encoding.
    """
    g = rg.graph
    nonroots = [v for v in g.vertices() if v not in rg.roots]
    limits.check("canonical_vertices", len(nonroots))
    root_order = [v for _, v in sorted((lab, v) for v, lab in rg.roots.items())]
    labels = tuple(lab for lab, _ in sorted((lab, v) for v, lab in rg.roots.items()))

    if not nonroots:
        perm_iter: Iterable[Tuple[int, ...]] = [()]
    else:
        # Refinement: group non-roots by an isomorphism-invariant signature
        # and only permute within compatible positions.
        root_index = {v: i for i, v in enumerate(root_order)}

        def signature(v: int) -> Tuple:
            root_adj = tuple(sorted(root_index[w] for w in g.neighbors(v) if w in root_index))
            deg_multiset = tuple(sorted(g.degree(w) for w in g.neighbors(v)))
            return (g.degree(v), root_adj, deg_multiset)

        cells: Dict[Tuple, List[int]] = {}
        for v in nonroots:
            cells.setdefault(signature(v), []).append(v)
        ordered_cells = [cells[k] for k in sorted(cells)]

        def perms():
            for parts in itertools.product(*(itertools.permutations(c) for c in ordered_cells)):
                yield tuple(v for part in parts for v in part)

        perm_iter = perms()

    best: Optional[bytes] = None
    for perm in perm_iter:
        order = root_order + list(perm)
        pos = {v: i for i, v in enumerate(order)}
        bits = bytearray()
        acc = 0
        count = 0
        for i in range(g.n):
            for j in range(i + 1, g.n):
                acc = (acc << 1) | (1 if g.has_edge(order[i], order[j]) else 0)
                count += 1
                if count == 8:
                    bits.append(acc)
                    acc, count = 0, 0
        if count:
            bits.append(acc << (8 - count))
        enc = bytes([g.n, len(labels)]) + bytes(
            b for lab in labels for b in lab.to_bytes(2, "big")
        ) + bytes(bits)
        if best is None or enc < best:
            best = enc
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# Subdivision normal form
# ---------------------------------------------------------------------------


def subdivision_normal_form(
    h: Pattern, path_lengths: Optional[Mapping[Edge, int]] = None
) -> Pattern:
    """Subdivide each edge once or twice, mirroring realization path lengths.

    An edge standing for a realization path of length 1 is kept, length 2
    gets one subdivision vertex, anything longer gets two.  Without
    ``path_lengths`` every edge is treated as long (subdivided twice).
    Isolated vertices are untouched.  The result's detail is at most four
    times the input budget.
    """
    g = h.graph
    lengths = dict(path_lengths or {})
    n = g.n
    edges: List[Edge] = []
    for e in sorted(g.edges):
        length = lengths.get(e, lengths.get((e[1], e[0]), 3))
        if length < 1:
            raise ValueError(f"path length for edge {e} must be >= 1")
        subs = 0 if length == 1 else (1 if length == 2 else 2)
        chain = [e[0]] + [n + i for i in range(subs)] + [e[1]]
        n += subs
        edges.extend((chain[i], chain[i + 1]) for i in range(len(chain) - 1))
    rooted = RootedGraph(Graph(n, edges), h.roots)
    return Pattern(rooted, 4 * h.delta)


# ---------------------------------------------------------------------------
# Certificate validators (independent of the constructions they check)
# ---------------------------------------------------------------------------


def verify_subdivision(
    base: Graph,
    host: Graph,
    branch_map: Mapping[int, int],
    paths: Mapping[Edge, Sequence[int]],
) -> bool:
    """Check that ``host`` is exactly a subdivision of ``base``.

    ``branch_map`` sends base vertices to host vertices and ``paths`` sends
    each base edge to the host path realizing it.  The paths must partition
    the host: internally disjoint, covering every host vertex and edge,
    with all interior vertices of host degree two.
    """
    if len(set(branch_map.values())) != len(branch_map):
        return False
    if set(branch_map) != set(base.vertices()):
        return False
    images = set(branch_map.values())
    seen_interior: set = set()
    used_edges: set = set()
    for e in base.edges:
        p = paths.get(e) or paths.get((e[1], e[0]))
        if p is None:
            return False
        if {p[0], p[-1]} != {branch_map[e[0]], branch_map[e[1]]}:
            return False
        if len(set(p)) != len(p):
            return False
        for a, b in zip(p, p[1:]):
            if not host.has_edge(a, b):
                return False
            used_edges.add(_norm_edge(a, b))
        for w in p[1:-1]:
            if w in images or w in seen_interior:
                return False
            if host.degree(w) != 2:
                return False
            seen_interior.add(w)
    if used_edges != host.edges:
        return False
    if images | seen_interior != set(host.vertices()):
        return False
    return True


def verify_minor_model(
    host: Graph,
    pattern: Graph,
    branch_sets: Mapping[int, Iterable[int]],
    host_roots: Optional[Mapping[int, int]] = None,
    pattern_roots: Optional[Mapping[int, int]] = None,
) -> bool:
    """Check a minor model: disjoint connected branch sets, one per pattern
    vertex, with an edge between the sets of adjacent pattern vertices.

    When roots are supplied, the branch set of a rooted pattern vertex must
    contain the identically labelled host root.
    """
    sets = {h: frozenset(s) for h, s in branch_sets.items()}
    if set(sets) != set(pattern.vertices()):
        return False
    all_used: set = set()
    for h, s in sets.items():
        if not s or not s <= set(host.vertices()):
            return False
        if all_used & s:
            return False
        all_used |= s
        if not host.is_connected_subset(s):
            return False
    for u, v in pattern.edges:
        if not any(host.has_edge(a, b) for a in sets[u] for b in sets[v]):
            return False
    if pattern_roots:
        host_by_label = {lab: v for v, lab in (host_roots or {}).items()}
        for pv, lab in pattern_roots.items():
            if lab not in host_by_label or host_by_label[lab] not in sets[pv]:
                return False
    return True
