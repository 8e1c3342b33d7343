"""Topological-minor containment and folios by dynamic programming over
nice tree decompositions, plus folio-preserving compression.

The DP state at a node records, for each bag vertex, its role in the
partial embedding (free, branch image, path interior, or reserved
isolated image) and, for each pattern edge, the committed path structure
as a set of segments.  A segment is an unordered pair of ends; an end is
either an anchor at a pattern endpoint or an open end at a bag vertex.
A vertex just reserved for a path carries the fresh segment (v, v).
Interior vertices of settled segments are abstracted away, so states
mention only bag vertices and the summary is exactly the boundary
behavior of the processed subgraph.
"""

from __future__ import annotations

import itertools
from math import factorial
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .core import (
    ExtendedFolio,
    Folio,
    Graph,
    Pattern,
    RootedGraph,
    all_graphs_on_labels,
)
from .limits import DEFAULT_LIMITS, Limits
from .oracles import Witness
from .patterns import pattern_universe
from .treewidth import NiceTreeDecomposition, TreeDecomposition, make_nice

# Role encodings: ('F',) free, ('B', h) branch image, ('P', e) path
# interior, ('IS',) reserved isolated image.
Role = Tuple
End = Tuple  # ('a', h) anchor | ('o', v) open at bag vertex
Segment = Tuple[End, End]
EdgeState = object  # 0 untouched | 1 done | ('A', segments-tuple)

UNTOUCHED = 0
DONE = 1


class ResourceBlowup(RuntimeError):
    """A DP table exceeded the declared size bound."""


def _seg(a: End, b: End) -> Segment:
    return (a, b) if a <= b else (b, a)


def _is_fresh(s: Segment) -> bool:
    return s[0] == s[1] and s[0][0] == "o"


def _partner(s: Segment, end: End) -> End:
    return s[1] if s[0] == end else s[0]


def _sorted_segs(segs: Iterable[Segment]) -> Tuple[Segment, ...]:
    return tuple(sorted(segs))


class _PatternInfo:
    def __init__(self, h: Pattern, host: RootedGraph):
        self.h = h
        hg = h.graph
        self.edges: List[Tuple[int, int]] = sorted(hg.edges)
        self.eidx = {e: i for i, e in enumerate(self.edges)}
        self.m = len(self.edges)
        self.deg = {v: hg.degree(v) for v in hg.vertices()}
        self.roots = dict(h.roots)
        self.iso_nonroot = sorted(
            v for v in hg.vertices() if hg.degree(v) == 0 and v not in h.roots
        )
        self.placeable = frozenset(
            v for v in hg.vertices() if hg.degree(v) > 0 or v in h.roots
        )
        self.incident: Dict[int, List[int]] = {v: [] for v in hg.vertices()}
        for i, (x, y) in enumerate(self.edges):
            self.incident[x].append(i)
            self.incident[y].append(i)
        # Host root vertex for each pattern root label, if present.
        host_by_label = {lab: v for v, lab in host.roots.items()}
        self.pinned: Dict[int, Optional[int]] = {}
        for hv, lab in self.roots.items():
            self.pinned[hv] = host_by_label.get(lab)


# ---------------------------------------------------------------------------
# Transitions
# ---------------------------------------------------------------------------


def _roles_dict(roles: Tuple) -> Dict[int, Role]:
    return dict(roles)


def _with_roles(roles: Dict[int, Role]) -> Tuple:
    return tuple(sorted(roles.items()))


def _commit_moves(info: _PatternInfo, host: Graph, roles: Dict[int, Role], v: int):
    """Candidate commits between the new vertex v and older bag vertices."""
    rv = roles[v]
    for u in host.neighbors(v):
        if u not in roles or u == v:
            continue
        ru = roles[u]
        if rv[0] == "P" and ru[0] == "P" and rv[1] == ru[1]:
            yield ("pp", rv[1], v, u)
        elif rv[0] == "P" and ru[0] == "B":
            e = info.edges[rv[1]]
            if ru[1] in e:
                yield ("anchor", rv[1], v, u, ru[1])
        elif rv[0] == "B" and ru[0] == "P":
            e = info.edges[ru[1]]
            if rv[1] in e:
                yield ("anchor", ru[1], u, v, rv[1])
        elif rv[0] == "B" and ru[0] == "B":
            key = (rv[1], ru[1]) if rv[1] < ru[1] else (ru[1], rv[1])
            if key in info.eidx:
                yield ("direct", info.eidx[key], v, u)


def _apply_move(edges: List[EdgeState], move) -> bool:
    """Mutate edge states by one commit; False if the commit is invalid."""
    kind = move[0]
    ei = move[1]
    st = edges[ei]
    if kind == "direct":
        if st != UNTOUCHED:
            return False
        edges[ei] = DONE
        return True
    if st == DONE or st == UNTOUCHED:
        # pp/anchor moves need existing open structure for both parties;
        # fresh segments are created at introduce time, so UNTOUCHED here
        # means the participant vertices are not reserved for this edge.
        return False
    segs = list(st[1])
    if kind == "pp":
        _, _, v, u = move
        ov, ou = ("o", v), ("o", u)
        sv = next((s for s in segs if ov in s), None)
        su = next((s for s in segs if ou in s), None)
        if sv is None or su is None or sv == su:
            return False
        merged = _seg(_partner(sv, ov), _partner(su, ou))
        segs.remove(sv)
        segs.remove(su)
    else:  # anchor
        _, _, v, _u, h = move
        ov, ah = ("o", v), ("a", h)
        if any(ah in s for s in segs):
            return False
        sv = next((s for s in segs if ov in s), None)
        if sv is None:
            return False
        merged = _seg(_partner(sv, ov), ah)
        segs.remove(sv)
    if merged[0][0] == "a" and merged[1][0] == "a":
        if segs:
            return False  # orphaned pieces can never join a finished path
        edges[ei] = DONE
        return True
    if merged[0] == merged[1]:
        return False  # closing a cycle
    segs.append(merged)
    edges[ei] = ("A", _sorted_segs(segs))
    return True


def _introduce(info: _PatternInfo, host: RootedGraph, table, v: int, iso_target: int):
    out: Dict[Tuple, Tuple] = {}
    hostg = host.graph
    host_is_root = v in host.roots

    for state in sorted(table, key=repr):
        roles_t, edges_t, placed, quota = state
        roles = _roles_dict(roles_t)
        bag_is = sum(1 for r in roles.values() if r[0] == "IS")
        bag_branch = {r[1] for r in roles.values() if r[0] == "B"}
        role_options: List[Role] = [("F",)]
        if quota + bag_is < iso_target:
            role_options.append(("IS",))
        for h in sorted(info.placeable):
            if h in placed or h in bag_branch:
                continue
            if hostg.degree(v) < info.deg[h]:
                continue
            pin = info.pinned.get(h, "unpinned")
            if h in info.roots:
                if pin != v:
                    continue
            role_options.append(("B", h))
        for ei in range(info.m):
            if edges_t and edges_t[ei] == DONE:
                continue
            role_options.append(("P", ei))

        edges_list = list(edges_t) if edges_t else [UNTOUCHED] * info.m

        for role in role_options:
            new_roles = dict(roles)
            new_roles[v] = role
            base_edges = list(edges_list)
            if role[0] == "P":
                ei = role[1]
                st = base_edges[ei]
                fresh = _seg(("o", v), ("o", v))
                if st == UNTOUCHED:
                    base_edges[ei] = ("A", (fresh,))
                else:
                    base_edges[ei] = ("A", _sorted_segs(list(st[1]) + [fresh]))
            moves = list(_commit_moves(info, hostg, new_roles, v))

            def explore(idx: int, edges_cur: List[EdgeState], commits: Tuple):
                if idx == len(moves):
                    new_state = (
                        _with_roles(new_roles),
                        tuple(edges_cur),
                        placed,
                        quota,
                    )
                    if new_state not in out:
                        out[new_state] = ("intro", v, role, commits, state)
                    return
                explore(idx + 1, edges_cur, commits)
                trial = list(edges_cur)
                move = moves[idx]
                if _apply_move(trial, move):
                    a, b = move[2], move[3]
                    explore(idx + 1, trial, commits + ((move[1], a, b),))

            explore(0, base_edges, ())
    return out


def _forget(info: _PatternInfo, table, v: int, iso_target: int):
    out: Dict[Tuple, Tuple] = {}
    for state in sorted(table, key=repr):
        roles_t, edges_t, placed, quota = state
        roles = _roles_dict(roles_t)
        role = roles.pop(v)
        new_placed, new_quota = placed, quota
        if role[0] == "IS":
            new_quota = quota + 1
            if new_quota > iso_target:
                continue
        elif role[0] == "B":
            h = role[1]
            ok = True
            for ei in info.incident[h]:
                st = edges_t[ei] if edges_t else UNTOUCHED
                if st == DONE:
                    continue
                if st == UNTOUCHED:
                    ok = False
                    break
                if not any(("a", h) in s for s in st[1]):
                    ok = False
                    break
            if not ok:
                continue
            new_placed = placed | {h}
        elif role[0] == "P":
            st = edges_t[role[1]]
            if st != DONE and st != UNTOUCHED and any(("o", v) in s for s in st[1]):
                continue  # an open end at a forgotten vertex can never extend
        new_state = (_with_roles(roles), edges_t, new_placed, new_quota)
        if new_state not in out:
            out[new_state] = ("forget", v, state)
    return out


def _merge_edge(info, stL: EdgeState, stR: EdgeState, roles: Dict[int, Role], ei: int):
    """Combine one edge's structure from two join children; None = invalid."""
    if stL == UNTOUCHED:
        return stR
    if stR == UNTOUCHED:
        return stL
    if stL == DONE or stR == DONE:
        return None  # done + anything non-untouched duplicates the path
    segsL, segsR = stL[1], stR[1]
    pe_vertices = [v for v, r in roles.items() if r == ("P", ei)]
    real = [s for s in segsL if not _is_fresh(s)] + [s for s in segsR if not _is_fresh(s)]

    # Per-vertex committed-degree check: each side contributes 2 minus its
    # end-incidence; the total must stay a path vertex (<= 2 edges).
    def incidence(segs, v):
        count = 0
        for s in segs:
            count += sum(1 for e in s if e == ("o", v))
        return count

    for v in pe_vertices:
        if incidence(segsL, v) + incidence(segsR, v) < 2:
            return None

    if not real:
        return ("A", _sorted_segs(s for s in set(segsL) | set(segsR)))

    # Structure check: the union of committed pieces must be disjoint paths.
    from collections import defaultdict

    adj = defaultdict(list)
    for i, (a, b) in enumerate(real):
        adj[a].append((i, b))
        adj[b].append((i, a))
    for token, inc in adj.items():
        cap = 1 if token[0] == "a" else 2
        if len(inc) > cap:
            return None
    visited: Set[int] = set()
    new_segments: List[Segment] = []
    done_component = False
    for i, (a, b) in enumerate(real):
        if i in visited:
            continue
        visited.add(i)
        ends = []
        cyclic = False
        for start_tok in (a, b):
            tok, via = start_tok, i
            while True:
                nxts = [(j, other) for j, other in adj[tok] if j != via]
                if not nxts:
                    ends.append(tok)
                    break
                j, other = nxts[0]
                if j in visited:
                    cyclic = True
                    break
                visited.add(j)
                via, tok = j, other
            if cyclic:
                break
        if cyclic:
            return None
        e1, e2 = ends
        if e1 == e2:
            return None  # component closes a cycle through one vertex
        if e1[0] == "a" and e2[0] == "a":
            done_component = True
            continue
        new_segments.append(_seg(e1, e2))

    fresh = []
    for v in pe_vertices:
        if incidence(segsL, v) == 2 and incidence(segsR, v) == 2:
            fresh.append(_seg(("o", v), ("o", v)))
    if done_component:
        if new_segments or fresh:
            return None
        return DONE
    return ("A", _sorted_segs(new_segments + fresh))


def _join(info: _PatternInfo, tableL, tableR, iso_target: int):
    out: Dict[Tuple, Tuple] = {}
    byrolesR: Dict[Tuple, List[Tuple]] = {}
    for sR in tableR:
        byrolesR.setdefault(sR[0], []).append(sR)
    for sL in sorted(tableL, key=repr):
        rolesL, edgesL, placedL, quotaL = sL
        roles = _roles_dict(rolesL)
        bag_branch = {r[1] for r in roles.values() if r[0] == "B"}
        bag_is = sum(1 for r in roles.values() if r[0] == "IS")
        for sR in sorted(byrolesR.get(rolesL, ()), key=repr):
            _, edgesR, placedR, quotaR = sR
            if placedL & placedR:
                continue
            if (placedL | placedR) & bag_branch:
                continue
            quota = quotaL + quotaR
            if quota + bag_is > iso_target:
                continue
            eL = edgesL if edgesL else (UNTOUCHED,) * info.m
            eR = edgesR if edgesR else (UNTOUCHED,) * info.m
            merged: List[EdgeState] = []
            ok = True
            for ei in range(info.m):
                st = _merge_edge(info, eL[ei], eR[ei], roles, ei)
                if st is None:
                    ok = False
                    break
                merged.append(st)
            if not ok:
                continue
            new_state = (rolesL, tuple(merged), placedL | placedR, quota)
            if new_state not in out:
                out[new_state] = ("join", sL, sR)
    return out


# ---------------------------------------------------------------------------
# The DP driver
# ---------------------------------------------------------------------------


class EmbeddingDP:
    """Bottom-up sweep of the embedding DP for one pattern."""

    def __init__(
        self,
        host: RootedGraph,
        pattern: Pattern,
        ntd: NiceTreeDecomposition,
        limits: Limits = DEFAULT_LIMITS,
        check_decomposition: bool = True,
    ):
        if check_decomposition and not ntd.validate_nice(host.graph):
            raise ValueError("invalid nice tree decomposition for host graph")
        limits.check("dp_width", max(ntd.width, 0))
        self.host = host
        self.pattern = pattern
        self.ntd = ntd
        self.limits = limits
        self.info = _PatternInfo(pattern, host)
        self.iso_target = len(self.info.iso_nonroot)
        self.tables: List[Dict[Tuple, Tuple]] = [dict() for _ in range(ntd.size)]
        self._bound = self._table_bound()
        self._run()

    def _table_bound(self) -> int:
        hv = self.pattern.graph.n
        he = self.info.m
        w = max(self.ntd.width, 0)
        # Role choices per bag slot, edge statuses, placed subsets, and a
        # factor for the open-end pairings the segment structure can take.
        return (hv + he + 2) ** (w + 1) * 3**he * 2**hv * factorial(w + 3)

    def _run(self):
        order = self._postorder()
        children = self.ntd.children()
        for node in order:
            kind = self.ntd.kinds[node]
            if kind[0] == "L":
                table = {_initial_state_m(self.info.m): ("leaf",)}
            elif kind[0] == "I":
                table = _introduce(
                    self.info, self.host, self.tables[children[node][0]], kind[1], self.iso_target
                )
            elif kind[0] == "F":
                table = _forget(self.info, self.tables[children[node][0]], kind[1], self.iso_target)
            else:
                left, right = children[node]
                table = _join(self.info, self.tables[left], self.tables[right], self.iso_target)
            if len(table) > self._bound:
                raise ResourceBlowup(
                    f"DP table at node {node} has {len(table)} states (> {self._bound})"
                )
            self.tables[node] = table

    def _postorder(self) -> List[int]:
        children = self.ntd.children()
        order: List[int] = []
        stack = [(self.ntd.root, False)]
        while stack:
            node, done = stack.pop()
            if done:
                order.append(node)
            else:
                stack.append((node, True))
                for c in children[node]:
                    stack.append((c, False))
        return order

    def accepting_state(self) -> Optional[Tuple]:
        target_edges = (DONE,) * self.info.m
        best = None
        for state in self.tables[self.ntd.root]:
            roles, edges, placed, quota = state
            if roles:
                continue
            if edges != target_edges and self.info.m > 0:
                continue
            if placed != self.info.placeable or quota != self.iso_target:
                continue
            if best is None or repr(state) < repr(best):
                best = state
        return best

    def found(self) -> bool:
        return self.accepting_state() is not None

    def witness(self) -> Optional[Witness]:
        state = self.accepting_state()
        if state is None:
            return None
        phi: Dict[int, int] = {}
        iso_hosts: Set[int] = set()  # both join branches introduce bag vertices
        edge_hosts: Dict[int, Set[Tuple[int, int]]] = {i: set() for i in range(self.info.m)}
        children = self.ntd.children()

        stack = [(self.ntd.root, state)]
        while stack:
            node, st = stack.pop()
            trace = self.tables[node][st]
            tag = trace[0]
            if tag == "leaf":
                continue
            if tag == "intro":
                _, v, role, commits, child_state = trace
                if role[0] == "B":
                    phi[role[1]] = v
                elif role[0] == "IS":
                    iso_hosts.add(v)
                for ei, a, b in commits:
                    edge_hosts[ei].add((a, b) if a < b else (b, a))
                stack.append((children[node][0], child_state))
            elif tag == "forget":
                stack.append((children[node][0], trace[2]))
            else:
                left, right = children[node]
                stack.append((left, trace[1]))
                stack.append((right, trace[2]))

        paths: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        for ei, (x, y) in enumerate(self.info.edges):
            path = _assemble_path(edge_hosts[ei], phi[x], phi[y])
            if path is None:
                return None
            paths[(x, y)] = path
        for hv, hv_host in zip(self.info.iso_nonroot, sorted(iso_hosts)):
            phi[hv] = hv_host
        return Witness(phi, paths)


def _initial_state_m(m: int) -> Tuple:
    return ((), (UNTOUCHED,) * m, frozenset(), 0)


def _assemble_path(host_edges: Set[Tuple[int, int]], a: int, b: int):
    if not host_edges:
        return None
    adj: Dict[int, List[int]] = {}
    for u, v in host_edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    path = [a]
    prev = None
    cur = a
    for _ in range(len(host_edges)):
        nxt = [w for w in adj.get(cur, ()) if w != prev]
        if len(nxt) != 1:
            return None
        prev, cur = cur, nxt[0]
        path.append(cur)
    return tuple(path) if cur == b and len(path) == len(host_edges) + 1 else None


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def tmc_dp(
    g: RootedGraph,
    h: Pattern,
    ntd: NiceTreeDecomposition,
    limits: Limits = DEFAULT_LIMITS,
) -> Optional[Witness]:
    """Containment by tree-decomposition DP; agrees with the brute oracle."""
    from .core import isolated_count

    limits.check("enum_delta", h.graph.m + isolated_count(h.graph))
    if h.graph.n == 0:
        return Witness({}, {})
    dp = EmbeddingDP(g, h, ntd, limits)
    return dp.witness()


def _augmented_ntd(g: RootedGraph, ntd: TreeDecomposition) -> NiceTreeDecomposition:
    """Add the global roots to every bag and re-normalize."""
    roots = frozenset(g.roots)
    bags = tuple(b | roots for b in ntd.bags)
    td = TreeDecomposition(ntd.parent, bags)
    return make_nice(td, g.graph)


def folio_dp(
    g: RootedGraph,
    delta: int,
    ntd: NiceTreeDecomposition,
    limits: Limits = DEFAULT_LIMITS,
) -> ExtendedFolio:
    """Extended folio via the DP: one sweep per candidate pattern and
    per graph overlaid on the roots."""
    if len(g.roots) > 16 * delta * delta:
        raise ValueError("root set exceeds 16*delta^2")
    aug = _augmented_ntd(g, ntd)
    universe = pattern_universe(g.roots.values(), delta, limits)
    entries = {}
    for x_edges in all_graphs_on_labels(g.roots.values()):
        host = g.union_on_roots(x_edges)
        members = []
        for pat in universe:
            if pat.graph.n == 0:
                members.append(pat.rooted)
                continue
            dp = EmbeddingDP(host, pat, aug, limits, check_decomposition=False)
            if dp.found():
                members.append(pat.rooted)
        entries[x_edges] = Folio(members)
    return ExtendedFolio(entries)


# ---------------------------------------------------------------------------
# Folio-preserving compression
# ---------------------------------------------------------------------------


def _gamma_sets(ntd: NiceTreeDecomposition) -> List[FrozenSet[int]]:
    children = ntd.children()
    gamma: List[Optional[FrozenSet[int]]] = [None] * ntd.size
    for node in _postorder_static(ntd):
        acc = set(ntd.bags[node])
        for c in children[node]:
            acc |= gamma[c]
        gamma[node] = frozenset(acc)
    return gamma  # type: ignore[return-value]


def _postorder_static(ntd: TreeDecomposition) -> List[int]:
    children = ntd.children()
    order: List[int] = []
    stack = [(ntd.root, False)]
    while stack:
        node, done = stack.pop()
        if done:
            order.append(node)
        else:
            stack.append((node, True))
            for c in children[node]:
                stack.append((c, False))
    return order


def _depths(ntd: TreeDecomposition) -> List[int]:
    depth = [0] * ntd.size
    children = ntd.children()
    stack = [(ntd.root, 0)]
    while stack:
        node, d = stack.pop()
        depth[node] = d
        for c in children[node]:
            stack.append((c, d + 1))
    return depth


def _rename_state(state: Tuple, sigma: Dict[int, int]) -> Tuple:
    roles_t, edges_t, placed, quota = state
    roles = tuple(sorted((sigma[v], r) for v, r in roles_t))
    new_edges = []
    for st in edges_t:
        if st == UNTOUCHED or st == DONE:
            new_edges.append(st)
        else:
            segs = []
            for s in st[1]:
                ends = tuple(("o", sigma[e[1]]) if e[0] == "o" else e for e in s)
                segs.append(_seg(ends[0], ends[1]))
            new_edges.append(("A", _sorted_segs(segs)))
    return (roles, tuple(new_edges), placed, quota)


def representative(
    g: RootedGraph,
    delta: int,
    ntd: NiceTreeDecomposition,
    limits: Limits = DEFAULT_LIMITS,
    return_trace: bool = False,
):
    """A folio-preserving compression of g.

    The global roots are first added to every bag.  For every candidate
    pattern within the detail budget, the embedding DP runs over the whole
    tree; the per-node state sets summarize each subtree's boundary
    behavior.  When an ancestor and a strict descendant admit a
    root-fixing bag bijection under which every pattern's state sets
    coincide, the ancestor's subtree is replaced by the descendant's (the
    summary proves the swap changes no containment answer, for any graph
    later overlaid on the roots).  This repeats until no pair matches.
    The result keeps the root labels and the extended folio of the input.
    """
    if len(g.roots) > 16 * delta * delta:
        raise ValueError("root set exceeds 16*delta^2")
    universe = [p for p in pattern_universe(g.roots.values(), delta, limits) if p.graph.n > 0]

    current = g
    tree = _augmented_ntd(g, ntd)
    splices = 0
    while True:
        match = _find_splice(current, universe, tree, limits)
        if match is None:
            break
        u_node, v_node, sigma = match
        current, tree = _apply_splice(current, tree, u_node, v_node, sigma)
        splices += 1
    if return_trace:
        return current, splices
    return current


def _find_splice(g: RootedGraph, universe, tree: NiceTreeDecomposition, limits: Limits):
    root_vs = frozenset(g.roots)
    state_sets: List[List[FrozenSet[Tuple]]] = [[] for _ in range(tree.size)]
    for pat in universe:
        dp = EmbeddingDP(g, pat, tree, limits, check_decomposition=False)
        for node in range(tree.size):
            state_sets[node].append(frozenset(dp.tables[node]))

    gamma = _gamma_sets(tree)
    depth = _depths(tree)
    ancestors: List[List[int]] = [[] for _ in range(tree.size)]
    for node in range(tree.size):
        p = tree.parent[node]
        chain = []
        while p >= 0:
            chain.append(p)
            p = tree.parent[p]
        ancestors[node] = chain

    candidates = []
    for v_node in range(tree.size):
        for u_node in ancestors[v_node]:
            if len(tree.bags[u_node]) != len(tree.bags[v_node]):
                continue
            if len(gamma[v_node]) >= len(gamma[u_node]):
                continue
            candidates.append((u_node, v_node))
    candidates.sort(key=lambda p: (-depth[p[1]], -depth[p[0]], p))

    for u_node, v_node in candidates:
        free_u = sorted(tree.bags[u_node] - root_vs)
        free_v = sorted(tree.bags[v_node] - root_vs)
        if not (tree.bags[u_node] >= root_vs and tree.bags[v_node] >= root_vs):
            continue
        for perm in itertools.permutations(free_v):
            sigma = dict(zip(free_u, perm))
            sigma.update({r: r for r in root_vs})
            if all(
                frozenset(_rename_state(s, sigma) for s in su) == sv
                for su, sv in zip(state_sets[u_node], state_sets[v_node])
            ):
                return u_node, v_node, sigma
    return None


def _apply_splice(
    g: RootedGraph, tree: NiceTreeDecomposition, u_node: int, v_node: int, sigma: Dict[int, int]
):
    gamma = _gamma_sets(tree)
    gu, gv = gamma[u_node], gamma[v_node]
    keep_outside = set(g.graph.vertices()) - set(gu)
    bag_u = tree.bags[u_node]

    new_vertices = sorted(keep_outside | set(gv))
    remap = {old: i for i, old in enumerate(new_vertices)}
    edges = []
    for a, b in g.graph.edges:
        a_in, b_in = a in gu, b in gu
        if not a_in and not b_in:
            edges.append((remap[a], remap[b]))
        elif a_in and b_in:
            if a in gv and b in gv:
                edges.append((remap[a], remap[b]))
        else:
            inside, outside = (a, b) if a_in else (b, a)
            if inside in bag_u:
                edges.append((remap[sigma[inside]], remap[outside]))
    roots = {remap[v]: lab for v, lab in g.roots.items()}
    new_graph = RootedGraph(Graph(len(new_vertices), edges), roots)

    # Rebuild the tree: subtree(v) replaces subtree(u); bags outside the old
    # subtree rename the interface vertices through sigma.
    children = tree.children()
    in_subtree_u = set()
    stack = [u_node]
    while stack:
        n = stack.pop()
        in_subtree_u.add(n)
        stack.extend(children[n])
    in_subtree_v = set()
    stack = [v_node]
    while stack:
        n = stack.pop()
        in_subtree_v.add(n)
        stack.extend(children[n])

    keep_nodes = sorted((set(range(tree.size)) - in_subtree_u) | in_subtree_v)
    node_map = {old: i for i, old in enumerate(keep_nodes)}

    def rename_bag(bag, outside):
        if outside:
            return frozenset(remap[sigma.get(v, v)] for v in bag)
        return frozenset(remap[v] for v in bag)

    def rename_kind(kind, outside):
        if kind[0] in ("I", "F"):
            v = kind[1]
            v2 = sigma.get(v, v) if outside else v
            return (kind[0], remap[v2])
        return kind

    parents = []
    bags = []
    kinds = []
    for old in keep_nodes:
        outside = old not in in_subtree_v
        bags.append(rename_bag(tree.bags[old], outside))
        kinds.append(rename_kind(tree.kinds[old], outside))
        p = tree.parent[old]
        if old == v_node:
            p = tree.parent[u_node]
        parents.append(node_map[p] if p >= 0 else -1)
    new_tree = NiceTreeDecomposition(tuple(parents), tuple(bags), kinds=tuple(kinds))
    return new_graph, new_tree
