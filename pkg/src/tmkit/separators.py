"""Minimal vertex separators, domination, and important separators.

Separators are disjoint from the terminal sets, and a direct X-Y edge
does not count as a connection (the whole toolkit works with internally
vertex-disjoint paths, and no vertex deletion can break a direct edge).
An X-Y separator S therefore kills every X-to-Y path that has at least
one internal vertex.  S dominates S' when it is no larger and its X-side
reach strictly contains S''s; the important separators are the minimal,
undominated ones, and at most 4^k of them have size at most k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .core import Graph


def _direct_edges(g: Graph, x: FrozenSet[int], y: FrozenSet[int]):
    return {e for e in g.edges if (e[0] in x and e[1] in y) or (e[0] in y and e[1] in x)}


def _without_direct(g: Graph, x: FrozenSet[int], y: FrozenSet[int]) -> Graph:
    drop = _direct_edges(g, x, y)
    return Graph(g.n, g.edges - drop) if drop else g


def _plain_reach(g: Graph, x: Iterable[int], s: Iterable[int]) -> FrozenSet[int]:
    s_set = set(s)
    seen = set(v for v in x if v not in s_set)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w not in seen and w not in s_set:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def reach(g: Graph, x: Iterable[int], s: Iterable[int], y: Iterable[int] = ()) -> FrozenSet[int]:
    """Vertices reachable from X minus S in the graph minus S.

    When Y is given, direct X-Y edges are not walked (all separator
    machinery here lives in the graph with those edges removed).
    """
    x_set, y_set = frozenset(x), frozenset(y)
    return _plain_reach(_without_direct(g, x_set, y_set), x_set, s)


def is_separator(g: Graph, x: Iterable[int], y: Iterable[int], s: Iterable[int]) -> bool:
    """S (disjoint from the terminals) cuts every internal X-Y path."""
    x_set, y_set, s_set = frozenset(x), frozenset(y), frozenset(s)
    if s_set & (x_set | y_set):
        return False
    return not (reach(g, x_set, s_set, y_set) & (y_set - x_set))


def is_minimal_separator(g: Graph, x, y, s: Iterable[int]) -> bool:
    s_set = frozenset(s)
    if not is_separator(g, x, y, s_set):
        return False
    return all(not is_separator(g, x, y, s_set - {v}) for v in s_set)


@dataclass(frozen=True)
class ImportantSeparator:
    vertices: FrozenSet[int]
    reach: FrozenSet[int]


# ---------------------------------------------------------------------------
# Vertex min-cut by unit-capacity flow on the split graph
# ---------------------------------------------------------------------------


class _SplitFlow:
    """Unit vertex-capacity max flow on the in/out split graph.

    Terminals get unbounded capacity (they may never enter a separator)
    and direct X-Y edges are omitted from the network.  ``removed``
    vertices are treated as absent.
    """

    def __init__(self, g: Graph, x: FrozenSet[int], y: FrozenSet[int],
                 removed: FrozenSet[int] = frozenset(), drop_direct: bool = True):
        self.g = g
        n = g.n
        self.source, self.sink = 2 * n, 2 * n + 1
        self.cap: Dict[Tuple[int, int], int] = {}
        self.adj: Dict[int, List[int]] = {i: [] for i in range(2 * n + 2)}
        big = n + 2
        terminals = x | y
        drop = _direct_edges(g, x, y) if drop_direct else set()
        for v in range(n):
            if v not in removed:
                self._add(2 * v, 2 * v + 1, big if v in terminals else 1)
        for u, v in sorted(g.edges - drop):
            if u in removed or v in removed:
                continue
            self._add(2 * u + 1, 2 * v, big)
            self._add(2 * v + 1, 2 * u, big)
        for v in sorted(x - removed):
            self._add(self.source, 2 * v, big)
        for v in sorted(y - removed):
            self._add(2 * v + 1, self.sink, big)
        self.value = 0
        self._augment_all()

    def _add(self, u, v, c):
        if (u, v) not in self.cap:
            self.cap[(u, v)] = 0
            self.cap.setdefault((v, u), 0)
            self.adj[u].append(v)
            self.adj[v].append(u)
        self.cap[(u, v)] += c

    def _augment_all(self):
        n = self.g.n
        while True:
            parent = {self.source: self.source}
            queue = [self.source]
            qi = 0
            while qi < len(queue) and self.sink not in parent:
                u = queue[qi]
                qi += 1
                for v in self.adj[u]:
                    if v not in parent and self.cap.get((u, v), 0) > 0:
                        parent[v] = u
                        queue.append(v)
            if self.sink not in parent:
                return
            path = []
            v = self.sink
            while v != self.source:
                path.append((parent[v], v))
                v = parent[v]
            bottleneck = min(self.cap[e] for e in path)
            self.value += bottleneck
            if self.value > n:
                raise ValueError("no finite separator exists for this query")
            for u, v in path:
                self.cap[(u, v)] -= bottleneck
                self.cap[(v, u)] += bottleneck

    def source_side_cut(self) -> FrozenSet[int]:
        seen = {self.source}
        stack = [self.source]
        while stack:
            u = stack.pop()
            for v in self.adj[u]:
                if v not in seen and self.cap.get((u, v), 0) > 0:
                    seen.add(v)
                    stack.append(v)
        return frozenset(
            v for v in range(self.g.n) if 2 * v in seen and 2 * v + 1 not in seen
        )

    def sink_side_cut(self) -> FrozenSet[int]:
        seen = {self.sink}
        stack = [self.sink]
        while stack:
            v = stack.pop()
            for u in self.adj[v]:
                if u not in seen and self.cap.get((u, v), 0) > 0:
                    seen.add(u)
                    stack.append(u)
        return frozenset(
            v for v in range(self.g.n) if 2 * v + 1 in seen and 2 * v not in seen
        )


def min_cut(
    g: Graph, x: Iterable[int], y: Iterable[int], removed: FrozenSet[int] = frozenset()
) -> Tuple[int, FrozenSet[int]]:
    """Minimum X-Y separator size and one witness separator."""
    x_set, y_set = frozenset(x), frozenset(y)
    if x_set & y_set:
        raise ValueError("X and Y overlap; no separator exists")
    if not x_set or not y_set:
        return 0, frozenset()
    flow = _SplitFlow(g, x_set, y_set, removed)
    return flow.value, flow.source_side_cut()


def _closest_to_y_min_cut(g: Graph, x, y, removed: FrozenSet[int] = frozenset()):
    flow = _SplitFlow(g, frozenset(x), frozenset(y), removed)
    return flow.value, flow.sink_side_cut()


def unique_min_important(g: Graph, x: Iterable[int], y: Iterable[int]) -> ImportantSeparator:
    """The unique important X-Y separator of minimum size: the minimum cut
    pushed maximally toward Y."""
    x_set, y_set = frozenset(x), frozenset(y)
    if x_set & y_set:
        raise ValueError("X and Y overlap; no separator exists")
    if not x_set or not y_set:
        raise ValueError("empty side; no separator to report")
    _, sep = _closest_to_y_min_cut(g, x_set, y_set)
    return ImportantSeparator(sep, reach(g, x_set, sep, y_set))


def dominates(g: Graph, x: Iterable[int], y: Iterable[int], s1, s2) -> bool:
    """True iff s1 dominates s2: no larger, strictly larger X-side reach."""
    s1, s2 = frozenset(s1), frozenset(s2)
    for s in (s1, s2):
        if not is_minimal_separator(g, x, y, s):
            raise ValueError(f"{sorted(s)} is not a minimal separator")
    r1, r2 = reach(g, x, s1, y), reach(g, x, s2, y)
    return len(s1) <= len(s2) and r2 < r1


def enumerate_important(
    g: Graph, x: Iterable[int], y: Iterable[int], k: int
) -> List[ImportantSeparator]:
    """All important X-Y separators of size at most k (at most 4^k of them).

    The recursion branches on each vertex of the minimum important
    separator being in or out of the final separator; the collected
    candidates are then filtered down to the minimal, undominated ones.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    x_set, y_set = frozenset(x), frozenset(y)
    if not x_set or not y_set or (x_set & y_set):
        return []
    # All machinery runs in the graph without the direct X-Y edges.
    g2 = _without_direct(g, x_set, y_set)

    candidates: Set[FrozenSet[int]] = set()

    def collect(xs: FrozenSet[int], chosen: FrozenSet[int], budget: int):
        if xs & y_set:
            return
        # A g2-edge between the committed X side and Y can never be cut
        # (separators avoid terminals and the X side): branch is empty.
        if any(w in y_set for v in sorted(xs) for w in g2.neighbors(v)):
            return
        flow = _SplitFlow(g2, xs, y_set, removed=chosen, drop_direct=False)
        lam = flow.value
        if lam == 0:
            candidates.add(chosen)
            return
        if lam > budget:
            return
        sep = flow.sink_side_cut()
        candidates.add(chosen | sep)
        v = min(sep)
        collect(xs, chosen | {v}, budget - 1)
        grown = xs | _plain_reach(g2, xs, sep | chosen) | {v}
        collect(grown, chosen, budget)

    collect(x_set, frozenset(), k)

    out = []
    finalists = [s for s in candidates if len(s) <= k and is_minimal_separator(g, x_set, y_set, s)]
    reaches = {s: reach(g, x_set, s, y_set) for s in finalists}
    for s in finalists:
        dominated = any(
            t != s and len(t) <= len(s) and reaches[s] < reaches[t] for t in finalists
        )
        if not dominated:
            out.append(ImportantSeparator(s, reaches[s]))
    out.sort(key=lambda imp: (len(imp.vertices), sorted(imp.vertices)))
    return out


def important_separators_exhaustive(
    g: Graph, x: Iterable[int], y: Iterable[int], k: int
) -> List[ImportantSeparator]:
    """Definition-checking enumeration over all vertex subsets.

    Exponential; this is the test oracle for ``enumerate_important``.
    """
    x_set, y_set = frozenset(x), frozenset(y)
    if not x_set or not y_set or (x_set & y_set):
        return []
    usable = [v for v in g.vertices() if v not in x_set | y_set]
    minimal_small: List[FrozenSet[int]] = []
    all_minimal: List[FrozenSet[int]] = []
    for size in range(len(usable) + 1):
        for combo in itertools.combinations(usable, size):
            s = frozenset(combo)
            if is_minimal_separator(g, x_set, y_set, s):
                all_minimal.append(s)
                if size <= k:
                    minimal_small.append(s)
    out = []
    for s in minimal_small:
        rs = reach(g, x_set, s, y_set)
        dominated = False
        for t in all_minimal:
            if t == s or len(t) > len(s):
                continue
            if rs < reach(g, x_set, t, y_set):
                dominated = True
                break
        if not dominated:
            out.append(ImportantSeparator(s, rs))
    out.sort(key=lambda imp: (len(imp.vertices), sorted(imp.vertices)))
    return out


# ---------------------------------------------------------------------------
# Separation growth around a dominated separator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SupreachReport:
    holds: bool
    pairs_checked: int
    detail: Tuple[str, ...]


def supreach_check(g: Graph, z: Iterable[int], v_prime: Iterable[int]) -> SupreachReport:
    """Check, on this instance, that domination grows the far side.

    For connected V' with neighborhood U, and every pair of minimal Z-U
    separators X, Y with Y dominating X, the separation side away from V'
    under X must be a strict subset of the one under Y.
    """
    z_set = frozenset(z)
    vp = frozenset(v_prime)
    if not g.is_connected_subset(vp):
        raise ValueError("V' must induce a connected subgraph")
    u = frozenset(w for v in vp for w in g.neighbors(v)) - vp
    if z_set & u:
        raise ValueError("Z intersects the neighborhood of V'")
    usable = [w for w in g.vertices() if w not in (vp | z_set | u)]
    minimal: List[FrozenSet[int]] = []
    for size in range(len(usable) + 1):
        for combo in itertools.combinations(usable, size):
            s = frozenset(combo)
            if is_minimal_separator(g, z_set, u, s):
                minimal.append(s)

    def far_side(s: FrozenSet[int]) -> FrozenSet[int]:
        comp = reach(g, vp, s)
        return frozenset(set(g.vertices()) - comp)

    detail = []
    checked = 0
    holds = True
    for sx in minimal:
        for sy in minimal:
            if sx == sy:
                continue
            rx, ry = reach(g, z_set, sx, u), reach(g, z_set, sy, u)
            if not (len(sy) <= len(sx) and rx < ry):
                continue
            checked += 1
            ax, ay = far_side(sx), far_side(sy)
            if not ax < ay:
                holds = False
                detail.append(f"X={sorted(sx)} Y={sorted(sy)}: far side not strictly grown")
    return SupreachReport(holds, checked, tuple(detail))
