"""Brute-force ground-truth solvers.

Everything here is correct by exhaustive search and deliberately
unclever; these functions are the oracles the polynomial machinery is
tested against.  All of them refuse inputs beyond the desk-scale
ceilings instead of silently running forever.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .core import (
    Edge,
    ExtendedFolio,
    Folio,
    Graph,
    Pattern,
    RootedGraph,
    all_graphs_on_labels,
    isolated_count,
)
from .limits import DEFAULT_LIMITS, Limits
from .patterns import pattern_universe


# ---------------------------------------------------------------------------
# Witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """Embedding certificate: branch map plus internally disjoint paths.

    ``branch_map`` sends every pattern vertex to a distinct host vertex and
    ``paths`` sends every pattern edge to the host path realizing it.
    """

    branch_map: Mapping[int, int]
    paths: Mapping[Edge, Tuple[int, ...]]


def validate_witness(g: RootedGraph, h: Pattern, w: Witness) -> bool:
    """Re-check all witness conditions from scratch."""
    hg = h.graph
    phi = dict(w.branch_map)
    if set(phi) != set(hg.vertices()):
        return False
    if len(set(phi.values())) != len(phi):
        return False
    if not all(0 <= x < g.n for x in phi.values()):
        return False
    for hv, lab in h.roots.items():
        if g.roots.get(phi[hv]) != lab:
            return False
    images = set(phi.values())
    seen_interior: Set[int] = set()
    for e in hg.edges:
        p = w.paths.get(e) or w.paths.get((e[1], e[0]))
        if p is None:
            return False
        if {p[0], p[-1]} != {phi[e[0]], phi[e[1]]}:
            return False
        if len(set(p)) != len(p):
            return False
        for a, b in zip(p, p[1:]):
            if not g.graph.has_edge(a, b):
                return False
        for x in p[1:-1]:
            if x in images or x in seen_interior:
                return False
            seen_interior.add(x)
    return True


# ---------------------------------------------------------------------------
# Topological minor containment
# ---------------------------------------------------------------------------


def tmc_brute(
    g: RootedGraph,
    h: Pattern,
    limits: Limits = DEFAULT_LIMITS,
    max_interior: Optional[int] = None,
) -> Optional[Witness]:
    """Exhaustive topological-minor search; a witness or None.

    Branch vertices are assigned lazily while the pattern edges are packed
    into internally disjoint host paths, which keeps the search close to a
    guided subdivision hunt instead of a blind map enumeration.
    ``max_interior`` caps the total number of subdivision vertices, which
    turns the search into an iterative-deepening primitive.
    """
    limits.check("tmc_host", g.n)
    limits.check("enum_delta", h.graph.m + isolated_count(h.graph))

    hg = h.graph
    host = g.graph
    if hg.n == 0:
        return Witness({}, {})
    if hg.n > g.n:
        return None

    # Pin pattern roots to the identically labelled host roots.
    host_by_label = {lab: v for v, lab in g.roots.items()}
    phi: Dict[int, int] = {}
    for hv, lab in h.roots.items():
        if lab not in host_by_label:
            return None
        phi[hv] = host_by_label[lab]
    if len(set(phi.values())) != len(phi):
        return None

    iso_nonroot = [v for v in hg.vertices() if hg.degree(v) == 0 and v not in h.roots]
    edges = sorted(hg.edges)
    used0 = 0
    for x in phi.values():
        used0 |= 1 << x

    memo_failed: Set[Tuple] = set()
    paths_out: Dict[Edge, Tuple[int, ...]] = {}

    def degree_ok(hv: int, cand: int) -> bool:
        return host.degree(cand) >= hg.degree(hv)

    def pack(remaining: List[Edge], assigned: Dict[int, int], used: int, interiors: int) -> bool:
        if not remaining:
            free = g.n - bin(used).count("1")
            return free >= len(iso_nonroot)
        memo_key = None
        if max_interior is None:
            frontier = tuple(
                sorted((hv, assigned[hv]) for e in remaining for hv in e if hv in assigned)
            )
            memo_key = (tuple(remaining), frontier, used)
            if memo_key in memo_failed:
                return False
        # Prefer edges with the most endpoints already placed.
        def rank(e: Edge) -> Tuple[int, int, Edge]:
            placed = (e[0] in assigned) + (e[1] in assigned)
            return (-placed, -(hg.degree(e[0]) + hg.degree(e[1])), e)

        e = min(remaining, key=rank)
        rest = [x for x in remaining if x != e]
        x, y = e
        for ax in _branch_candidates(x, assigned, used, host, degree_ok):
            used_x = used | (1 << ax)
            newly_x = x not in assigned
            assigned_x = dict(assigned)
            assigned_x[x] = ax
            for ay in _branch_candidates(y, assigned_x, used_x, host, degree_ok):
                used_xy = used_x | (1 << ay)
                assigned_xy = dict(assigned_x)
                assigned_xy[y] = ay
                budget = None if max_interior is None else max_interior - interiors
                for path in _simple_paths(host, ax, ay, used_xy, budget):
                    inner = 0
                    for w in path[1:-1]:
                        inner |= 1 << w
                    paths_out[e] = path
                    if pack(rest, assigned_xy, used_xy | inner, interiors + len(path) - 2):
                        return True
                    del paths_out[e]
        if memo_key is not None:
            memo_failed.add(memo_key)
        return False

    if pack(edges, phi, used0, 0):
        assigned = _recover_assignment(hg, phi, paths_out)
        used = set(assigned.values())
        for p in paths_out.values():
            used.update(p[1:-1])
        free = [v for v in host.vertices() if v not in used]
        for hv, fv in zip(iso_nonroot, free):
            assigned[hv] = fv
        return Witness(assigned, dict(paths_out))
    return None


def _branch_candidates(hv, assigned, used, host, degree_ok):
    if hv in assigned:
        yield assigned[hv]
        return
    for cand in host.vertices():
        bit = 1 << cand
        if used & bit:
            continue
        if degree_ok(hv, cand):
            yield cand


def _simple_paths(host: Graph, a: int, b: int, used: int, budget: Optional[int]):
    """Paths a..b whose interiors avoid ``used``; shortest-leaning order."""
    if a == b:
        return
    # BFS distances to b through allowed vertices, for search ordering.
    dist = {b: 0}
    queue = [b]
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for w in host.neighbors(v):
            if w not in dist and (not (used >> w) & 1 or w == a):
                dist[w] = dist[v] + 1
                queue.append(w)
    if a not in dist:
        return
    path = [a]
    on_path = 1 << a

    def extend():
        nonlocal on_path
        v = path[-1]
        if host.has_edge(v, b):
            yield tuple(path) + (b,)
        if budget is not None and len(path) - 1 >= budget:
            return
        for w in sorted(host.neighbors(v), key=lambda u: dist.get(u, 1 << 20)):
            if w == b or (used >> w) & 1 or (on_path >> w) & 1 or w not in dist:
                continue
            path.append(w)
            on_path |= 1 << w
            yield from extend()
            path.pop()
            on_path &= ~(1 << w)

    yield from extend()


def _recover_assignment(hg: Graph, phi: Dict[int, int], paths: Dict[Edge, Tuple[int, ...]]):
    assigned = dict(phi)
    changed = True
    while changed:
        changed = False
        for (x, y), p in paths.items():
            if x in assigned and y not in assigned:
                assigned[y] = p[-1] if p[0] == assigned[x] else p[0]
                changed = True
            elif y in assigned and x not in assigned:
                assigned[x] = p[-1] if p[0] == assigned[y] else p[0]
                changed = True
            elif x not in assigned and y not in assigned:
                assigned[x], assigned[y] = p[0], p[-1]
                changed = True
    return assigned


# ---------------------------------------------------------------------------
# Folios
# ---------------------------------------------------------------------------


def folio_brute(g: RootedGraph, delta: int, limits: Limits = DEFAULT_LIMITS) -> Folio:
    """The folio with detail budget ``delta``: every realizable pattern."""
    members = []
    for pat in pattern_universe(g.roots.values(), delta, limits):
        if tmc_brute(g, pat, limits) is not None:
            members.append(pat.rooted)
    return Folio(members)


def extended_folio_brute(
    g: RootedGraph, delta: int, limits: Limits = DEFAULT_LIMITS
) -> ExtendedFolio:
    """For each graph X on the root labels, the folio of G with X overlaid."""
    if len(g.roots) > 16 * delta * delta:
        raise ValueError("root set exceeds 16*delta^2")
    entries = {}
    for x_edges in all_graphs_on_labels(g.roots.values()):
        host = g.union_on_roots(x_edges)
        entries[x_edges] = folio_brute(host, delta, limits)
    return ExtendedFolio(entries)


def is_dk_irrelevant_brute(
    g: RootedGraph, v: int, delta: int, k: int, limits: Limits = DEFAULT_LIMITS
) -> bool:
    """True iff deleting v preserves the extended folio of G minus S for
    every deletion set S of size at most k (roots are never deletable as v)."""
    limits.check("irrelevance_host", g.n)
    limits.check("irrelevance_k", k)
    limits.check("irrelevance_delta", delta)
    if v in g.roots:
        raise ValueError("roots are never candidates for deletion")
    others = [u for u in range(g.n) if u != v]
    for size in range(k + 1):
        for s in itertools.combinations(others, size):
            without_s, remap = g.delete_vertices(s)
            left = extended_folio_brute(without_s, delta, limits)
            without_sv, _ = without_s.delete_vertices([remap[v]])
            right = extended_folio_brute(without_sv, delta, limits)
            if left != right:
                return False
    return True


# ---------------------------------------------------------------------------
# Disjoint paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DisjointPathsInstance:
    """Graph plus unordered terminal pairs.

    A solution is one path per pair, pairwise internally vertex-disjoint,
    with no terminal of any pair appearing as an interior vertex.
    """

    graph: Graph
    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for s, t in self.pairs:
            if s == t:
                raise ValueError("terminal pair with equal endpoints")
            if not (0 <= s < self.graph.n and 0 <= t < self.graph.n):
                raise ValueError("terminal out of range")
            key = frozenset((s, t))
            if key in seen:
                raise ValueError("duplicate terminal pair")
            seen.add(key)

    @property
    def k(self) -> int:
        return len(self.pairs)

    def terminals(self) -> FrozenSet[int]:
        return frozenset(v for p in self.pairs for v in p)


def _pairs_cross_on_cycle(pairs, cycle: Sequence[int]) -> bool:
    pos = {v: i for i, v in enumerate(cycle)}
    if not all(s in pos and t in pos for s, t in pairs):
        return False
    n = len(cycle)
    for (a, b), (c, d) in itertools.combinations(pairs, 2):
        if len({a, b, c, d}) < 4:
            continue
        span = (pos[b] - pos[a]) % n
        c_in = 0 < (pos[c] - pos[a]) % n < span
        d_in = 0 < (pos[d] - pos[a]) % n < span
        if c_in != d_in:
            return True
    return False


def disjoint_paths_brute(
    inst: DisjointPathsInstance,
    limits: Limits = DEFAULT_LIMITS,
    outer_cycle: Optional[Sequence[int]] = None,
) -> Optional[List[Tuple[int, ...]]]:
    """Exhaustive backtracking linkage search.

    ``outer_cycle`` may name a face cycle of a planar drawing containing
    every terminal; two pairs interleaving on that cycle can never be
    linked (any realization of one path separates the other pair inside
    the disk), so such instances are refused immediately.
    """
    limits.check("disjoint_paths_host", inst.graph.n)
    limits.check("disjoint_paths_pairs", inst.k)
    g = inst.graph
    terminals = inst.terminals()
    if outer_cycle is not None and _pairs_cross_on_cycle(inst.pairs, outer_cycle):
        return None

    # Route pairs in increasing order of unconstrained distance.
    def bfs_dist(s: int, t: int, blocked: Set[int]) -> Optional[int]:
        if s == t:
            return 0
        dist = {s: 0}
        queue = [s]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for w in g.neighbors(v):
                if w == t:
                    return dist[v] + 1
                if w in dist or w in blocked:
                    continue
                dist[w] = dist[v] + 1
                queue.append(w)
        return None

    order = sorted(
        inst.pairs,
        key=lambda p: (bfs_dist(p[0], p[1], terminals - {p[0], p[1]}) or 10**9, p),
    )

    solution: List[Tuple[int, ...]] = []

    def feasible(remaining: List[Tuple[int, int]], used: Set[int]) -> bool:
        for s, t in remaining:
            blocked = (used | terminals) - {s, t}
            if bfs_dist(s, t, blocked) is None:
                return False
        return True

    def route(idx: int, used: Set[int]) -> bool:
        if idx == len(order):
            return True
        s, t = order[idx]
        blocked = (used | terminals) - {s, t}
        for path in _simple_paths_blocked(g, s, t, blocked):
            inner = set(path[1:-1])
            solution.append(path)
            if feasible(order[idx + 1 :], used | inner) and route(idx + 1, used | inner):
                return True
            solution.pop()
        return False

    if not feasible(list(order), set()):
        return None
    if route(0, set()):
        by_pair = {frozenset((p[0], p[-1])): p for p in solution}
        return [by_pair[frozenset(p)] for p in inst.pairs]
    return None


def _simple_paths_blocked(g: Graph, s: int, t: int, blocked: Set[int]):
    dist = {t: 0}
    queue = [t]
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for w in g.neighbors(v):
            if w not in dist and (w not in blocked or w == s):
                dist[w] = dist[v] + 1
                queue.append(w)
    if s not in dist:
        return
    path = [s]
    on_path = {s}

    def extend():
        v = path[-1]
        if g.has_edge(v, t):
            yield tuple(path) + (t,)
        for w in sorted(g.neighbors(v), key=lambda u: dist.get(u, 1 << 20)):
            if w == t or w in blocked or w in on_path or w not in dist:
                continue
            path.append(w)
            on_path.add(w)
            yield from extend()
            path.pop()
            on_path.discard(w)

    yield from extend()


# ---------------------------------------------------------------------------
# Minor models
# ---------------------------------------------------------------------------


def minor_model_brute(
    g: Graph, h: Graph, limits: Limits = DEFAULT_LIMITS
) -> Optional[Dict[int, FrozenSet[int]]]:
    """Exhaustive minor-model search: disjoint connected branch sets."""
    limits.check("minor_pattern", h.n)
    limits.check("minor_host", g.n)
    if h.n == 0:
        return {}
    if h.n > g.n:
        return None
    order = sorted(h.vertices(), key=lambda v: -h.degree(v))
    model: Dict[int, FrozenSet[int]] = {}

    def candidates(hv: int, used: Set[int]):
        needed = [model[u] for u in h.neighbors(hv) if u in model]
        max_size = g.n - len(used) - (h.n - len(model) - 1)
        seen: Set[FrozenSet[int]] = set()
        for start in g.vertices():
            if start in used:
                continue
            # Grow connected subsets from `start`, only adding vertices
            # larger than start not reachable earlier (dedup by frozenset).
            stack = [(frozenset([start]), frozenset(w for w in g.neighbors(start) if w not in used))]
            while stack:
                subset, frontier = stack.pop()
                if subset not in seen:
                    seen.add(subset)
                    if all(any(g.has_edge(a, b) for a in subset for b in ns) for ns in needed):
                        yield subset
                    if len(subset) < max_size:
                        for w in sorted(frontier):
                            new_frontier = (frontier | frozenset(
                                x for x in g.neighbors(w) if x not in used
                            )) - subset - {w}
                            stack.append((subset | {w}, new_frontier))

    def assign(i: int, used: Set[int]) -> bool:
        if i == len(order):
            return True
        hv = order[i]
        for subset in candidates(hv, used):
            model[hv] = subset
            if assign(i + 1, used | subset):
                return True
            del model[hv]
        return False

    if assign(0, set()):
        return dict(model)
    return None


# ---------------------------------------------------------------------------
# TM-Deletion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DeletionInstance:
    """TM-Deletion input: delete at most k vertices to exclude every
    forbidden pattern as a topological minor."""

    graph: RootedGraph
    forbidden: Tuple[Pattern, ...]
    budget: int
    h_star: int = 0

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        for f in self.forbidden:
            if f.roots:
                raise ValueError("forbidden patterns are unrooted")
        hs = max((f.graph.n for f in self.forbidden), default=0)
        if self.h_star and hs > self.h_star:
            raise ValueError("forbidden pattern exceeds declared h_star")


def excludes_all(
    g: RootedGraph, forbidden: Sequence[Pattern], limits: Limits = DEFAULT_LIMITS
) -> bool:
    return all(tmc_brute(g, f, limits) is None for f in forbidden)


def tmdel_brute(
    inst: DeletionInstance, limits: Limits = DEFAULT_LIMITS
) -> Optional[FrozenSet[int]]:
    """Smallest deletion set of size <= budget, or None."""
    limits.check("tmdel_host", inst.graph.n)
    limits.check("tmdel_budget", inst.budget)
    for size in range(inst.budget + 1):
        for s in itertools.combinations(range(inst.graph.n), size):
            residual, _ = inst.graph.delete_vertices(s)
            if excludes_all(residual, inst.forbidden, limits):
                return frozenset(s)
    return None
