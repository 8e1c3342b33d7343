"""Exact small-width tree decompositions and nice-form conversion.

The exact engine runs safe elimination reductions (simplicial, and
almost-simplicial guarded by a lower bound) and finishes the remaining
kernel with a feasible-subset dynamic program over elimination
orderings.  A min-fill sweep runs first to fast-accept easy instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .core import Graph
from .limits import CeilingExceeded, DEFAULT_LIMITS, Limits

NodeKind = Tuple  # ('L',) | ('I', v) | ('F', v) | ('J',)


@dataclass(frozen=True)
class TreeDecomposition:
    """Rooted bag tree: ``parent[i]`` is -1 for the root."""

    parent: Tuple[int, ...]
    bags: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        if len(self.parent) != len(self.bags):
            raise ValueError("parent/bags length mismatch")
        if sum(1 for p in self.parent if p == -1) != 1:
            raise ValueError("exactly one root required")

    @property
    def size(self) -> int:
        return len(self.bags)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=1) - 1

    @property
    def root(self) -> int:
        return self.parent.index(-1)

    def children(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in self.bags]
        for i, p in enumerate(self.parent):
            if p >= 0:
                out[p].append(i)
        return out

    def validate(self, g: Graph) -> bool:
        """Edge coverage plus subtree connectivity for every vertex."""
        for u, v in g.edges:
            if not any(u in b and v in b for b in self.bags):
                return False
        children = self.children()
        for x in g.vertices():
            nodes = [i for i, b in enumerate(self.bags) if x in b]
            if not nodes:
                return False
            node_set = set(nodes)
            seen = {nodes[0]}
            stack = [nodes[0]]
            while stack:
                i = stack.pop()
                for j in children[i] + ([self.parent[i]] if self.parent[i] >= 0 else []):
                    if j in node_set and j not in seen:
                        seen.add(j)
                        stack.append(j)
            if seen != node_set:
                return False
        return True


@dataclass(frozen=True)
class NiceTreeDecomposition(TreeDecomposition):
    """Tree decomposition with typed nodes and an empty root bag."""

    kinds: Tuple[NodeKind, ...] = ()

    def validate_nice(self, g: Graph) -> bool:
        if not self.validate(g):
            return False
        if self.bags[self.root]:
            return False
        children = self.children()
        for i, kind in enumerate(self.kinds):
            ch = children[i]
            bag = self.bags[i]
            tag = kind[0]
            if tag == "L":
                if ch or bag:
                    return False
            elif tag == "I":
                if len(ch) != 1 or kind[1] not in bag:
                    return False
                if self.bags[ch[0]] != bag - {kind[1]}:
                    return False
            elif tag == "F":
                if len(ch) != 1 or kind[1] in bag:
                    return False
                if self.bags[ch[0]] != bag | {kind[1]}:
                    return False
            elif tag == "J":
                if len(ch) != 2:
                    return False
                if any(self.bags[c] != bag for c in ch):
                    return False
            else:
                return False
        return True


# ---------------------------------------------------------------------------
# Lower bounds, reductions
# ---------------------------------------------------------------------------


def minor_min_width(g: Graph) -> int:
    """Contraction-based treewidth lower bound (minor-min-width)."""
    adj: Dict[int, Set[int]] = {v: set(g.neighbors(v)) for v in g.vertices()}
    best = 0
    while len(adj) > 1:
        d, u = min((len(ns), v) for v, ns in adj.items())
        best = max(best, d)
        if d == 0:
            del adj[u]
            continue
        # Contract u into the neighbor sharing the fewest common neighbors.
        _, w = min((len(adj[u] & adj[x]), x) for x in adj[u])
        merged = (adj[u] | adj[w]) - {u, w}
        for x in adj[u]:
            adj[x].discard(u)
        for x in adj[w]:
            adj[x].discard(w)
        del adj[u]
        adj[w] = merged
        for x in merged:
            adj[x].add(w)
    return best


def _is_clique(adj: Dict[int, Set[int]], vs: Set[int]) -> bool:
    return all(b in adj[a] for a in vs for b in vs if a != b)


def _eliminate(adj: Dict[int, Set[int]], v: int) -> None:
    ns = adj[v]
    for a in ns:
        adj[a] |= ns - {a} - {v}
        adj[a].discard(v)
    del adj[v]


def min_fill_order(g: Graph) -> Tuple[List[int], int]:
    """Min-fill elimination ordering and its width (an upper bound)."""
    adj: Dict[int, Set[int]] = {v: set(g.neighbors(v)) for v in g.vertices()}
    order: List[int] = []
    width = 0
    while adj:
        def fill(v: int) -> int:
            ns = adj[v]
            return sum(1 for a, b in itertools.combinations(sorted(ns), 2) if b not in adj[a])

        _, v = min((fill(v), v) for v in adj)
        width = max(width, len(adj[v]))
        _eliminate(adj, v)
        order.append(v)
    return order, width


def _safe_reductions(
    g: Graph, t: int
) -> Tuple[Optional[List[int]], Dict[int, Set[int]], int]:
    """Eliminate simplicial / guarded almost-simplicial vertices.

    Returns (prefix order, kernel adjacency, low).  A None prefix means
    the instance is already certified to have treewidth above t.
    """
    adj: Dict[int, Set[int]] = {v: set(g.neighbors(v)) for v in g.vertices()}
    low = minor_min_width(g)
    if low > t:
        return None, adj, low
    order: List[int] = []
    changed = True
    while changed and adj:
        changed = False
        for v in sorted(adj):
            ns = adj[v]
            if _is_clique(adj, ns):
                if len(ns) > t:
                    return None, adj, max(low, len(ns))
                low = max(low, len(ns))
                _eliminate(adj, v)
                order.append(v)
                changed = True
                break
            if len(ns) <= low and any(
                _is_clique(adj, ns - {w}) for w in ns
            ):
                _eliminate(adj, v)
                order.append(v)
                changed = True
                break
    return order, adj, low


def _kernel_order_leq(adj: Dict[int, Set[int]], t: int) -> Optional[List[int]]:
    """Subset DP: an elimination ordering of width <= t for the kernel."""
    verts = sorted(adj)
    n = len(verts)
    if n == 0:
        return []
    idx = {v: i for i, v in enumerate(verts)}
    nbr = [0] * n
    for v, ns in adj.items():
        for w in ns:
            nbr[idx[v]] |= 1 << idx[w]
    full = (1 << n) - 1

    def elim_degree(mask: int, i: int) -> int:
        # Neighborhood of the eliminated region {mask}|{i} grown through mask.
        region = 1 << i
        frontier = nbr[i]
        boundary = 0
        while frontier:
            b = frontier & (-frontier)
            frontier ^= b
            j = b.bit_length() - 1
            if (mask >> j) & 1:
                if not (region >> j) & 1:
                    region |= b
                    frontier |= nbr[j] & ~region
            else:
                boundary |= b
        return bin(boundary).count("1")

    layer = {0}
    parents: Dict[int, Tuple[int, int]] = {}
    for _ in range(n):
        nxt = set()
        for mask in layer:
            for i in range(n):
                if (mask >> i) & 1:
                    continue
                new = mask | (1 << i)
                if new in nxt or new in parents:
                    continue
                if elim_degree(mask, i) <= t:
                    nxt.add(new)
                    parents[new] = (mask, i)
        if not nxt:
            return None
        layer = nxt
    if full not in parents and full != 0:
        return None
    order_idx: List[int] = []
    mask = full
    while mask:
        mask, i = parents[mask]
        order_idx.append(i)
    order_idx.reverse()
    return [verts[i] for i in order_idx]


def decide_treewidth_leq(g: Graph, t: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Exact decision tw(g) <= t."""
    return _order_of_width_leq(g, t, limits) is not None


def _order_of_width_leq(g: Graph, t: int, limits: Limits) -> Optional[List[int]]:
    if t < 0:
        return None
    if g.n == 0:
        return []
    if t >= g.n - 1:
        return list(g.vertices())
    order, width = min_fill_order(g)
    if width <= t:
        return order
    prefix, kernel, low = _safe_reductions(g, t)
    if prefix is None or low > t:
        return None
    limits.check("treewidth_exact", len(kernel))
    suffix = _kernel_order_leq(kernel, t)
    if suffix is None:
        return None
    return prefix + suffix


def decomposition_from_order(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Tree decomposition induced by an elimination ordering."""
    if g.n == 0:
        return TreeDecomposition((-1,), (frozenset(),))
    adj: Dict[int, Set[int]] = {v: set(g.neighbors(v)) for v in g.vertices()}
    cliques: List[Tuple[int, FrozenSet[int]]] = []
    for v in order:
        cliques.append((v, frozenset(adj[v])))
        _eliminate(adj, v)
    bags: List[FrozenSet[int]] = []
    parent: List[int] = []
    position: Dict[int, int] = {}
    # Build from the last eliminated vertex backwards.
    v_last, _ = cliques[-1]
    bags.append(frozenset([v_last]))
    parent.append(-1)
    position[v_last] = 0
    for v, clique in reversed(cliques[:-1]):
        attach = 0
        for i, b in enumerate(bags):
            if clique <= b:
                attach = i
                break
        bags.append(clique | {v})
        parent.append(attach)
        position[v] = len(bags) - 1
    return TreeDecomposition(tuple(parent), tuple(bags))


def treewidth_exact(
    g: Graph, t: int, limits: Limits = DEFAULT_LIMITS
) -> Optional[TreeDecomposition]:
    """A width-<=t decomposition if tw(g) <= t, else None (exact)."""
    if t < 0:
        raise ValueError("width bound must be non-negative")
    order = _order_of_width_leq(g, t, limits)
    if order is None:
        return None
    td = decomposition_from_order(g, order)
    assert td.width <= t and td.validate(g)
    return td


def treewidth_value(g: Graph, limits: Limits = DEFAULT_LIMITS) -> int:
    """Exact treewidth by scanning the bound upward from a lower bound."""
    if g.n == 0:
        return 0
    t = minor_min_width(g)
    while not decide_treewidth_leq(g, t, limits):
        t += 1
    return t


# ---------------------------------------------------------------------------
# Nice-form conversion
# ---------------------------------------------------------------------------


def make_nice(td: TreeDecomposition, g: Graph) -> NiceTreeDecomposition:
    """Nice decomposition of identical width: typed nodes, empty root bag."""
    children = td.children()
    bags: List[FrozenSet[int]] = []
    kinds: List[NodeKind] = []
    parent: List[int] = []

    def new_node(bag: FrozenSet[int], kind: NodeKind, child_ids: Sequence[int]) -> int:
        nid = len(bags)
        bags.append(bag)
        kinds.append(kind)
        parent.append(-1)
        for c in child_ids:
            parent[c] = nid
        return nid

    def chain_leaf_to(bag: FrozenSet[int]) -> int:
        node = new_node(frozenset(), ("L",), ())
        acc: FrozenSet[int] = frozenset()
        for v in sorted(bag):
            acc = acc | {v}
            node = new_node(acc, ("I", v), (node,))
        return node

    def chain_between(top_bag: FrozenSet[int], child_id: int) -> int:
        """Forget/introduce chain turning the child's bag into top_bag."""
        cur = bags[child_id]
        node = child_id
        for v in sorted(cur - top_bag):
            cur = cur - {v}
            node = new_node(cur, ("F", v), (node,))
        for v in sorted(top_bag - cur):
            cur = cur | {v}
            node = new_node(cur, ("I", v), (node,))
        return node

    def build(old: int) -> int:
        bag = td.bags[old]
        subs = [chain_between(bag, build(c)) for c in children[old]]
        if not subs:
            return chain_leaf_to(bag)
        node = subs[0]
        for other in subs[1:]:
            node = new_node(bag, ("J",), (node, other))
        return node

    top = build(td.root)
    cur = bags[top]
    node = top
    for v in sorted(cur):
        cur = cur - {v}
        node = new_node(cur, ("F", v), (node,))
    out = NiceTreeDecomposition(tuple(parent), tuple(bags), kinds=tuple(kinds))
    assert out.width == max(td.width, 0) or out.width <= td.width
    return out


def nice_decomposition(
    g: Graph, t: Optional[int] = None, limits: Limits = DEFAULT_LIMITS
) -> Optional[NiceTreeDecomposition]:
    """Convenience: exact decomposition at the smallest width, made nice."""
    width = treewidth_value(g, limits) if t is None else t
    td = treewidth_exact(g, width, limits)
    if td is None:
        return None
    return make_nice(td, g)


# ---------------------------------------------------------------------------
# Certified window
# ---------------------------------------------------------------------------


def certified_window(g: Graph, t: int, limits: Limits = DEFAULT_LIMITS) -> Graph:
    """Edge-induced subgraph with treewidth in (t, 2t], found by halving.

    Maintains edge sets F and A with tw(G[F]) <= t and tw(G[A+F]) > t,
    splitting A in half each round; stops as soon as tw(G[A+F]) <= 2t.
    Requires tw(g) > t.
    """
    if t < 1:
        raise ValueError("t must be positive")
    if decide_treewidth_leq(g, t, limits):
        raise ValueError("treewidth is not above t; no window exists")

    def edge_graph(edges) -> Graph:
        return Graph(g.n, edges)

    f: Set = set()
    a: Set = set(g.edges)
    while not decide_treewidth_leq(edge_graph(f | a), 2 * t, limits):
        half = sorted(a)[: (len(a) + 1) // 2]
        s = set(half)
        if decide_treewidth_leq(edge_graph(f | s), t, limits):
            f |= s
            a -= s
        else:
            a = s
    window = edge_graph(f | a)
    assert not decide_treewidth_leq(window, t, limits)
    return window


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def td_dumps(td: TreeDecomposition) -> str:
    lines = [f"td {td.size} {td.width}"]
    for i, bag in enumerate(td.bags):
        lines.append(f"b {i} " + " ".join(str(v) for v in sorted(bag)))
    for i, p in enumerate(td.parent):
        if p >= 0:
            lines.append(f"t {p} {i}")
    if isinstance(td, NiceTreeDecomposition):
        for i, kind in enumerate(td.kinds):
            if kind[0] in ("I", "F"):
                lines.append(f"k {i} {kind[0]} {kind[1]}")
            else:
                lines.append(f"k {i} {'Leaf' if kind[0] == 'L' else 'J'}")
    return "\n".join(lines) + "\n"


def td_loads(text: str) -> TreeDecomposition:
    size = None
    bags: Dict[int, FrozenSet[int]] = {}
    parent: Dict[int, int] = {}
    kinds: Dict[int, NodeKind] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "td":
            size = int(parts[1])
        elif parts[0] == "b":
            bags[int(parts[1])] = frozenset(int(x) for x in parts[2:])
        elif parts[0] == "t":
            parent[int(parts[2])] = int(parts[1])
        elif parts[0] == "k":
            i = int(parts[1])
            tag = parts[2]
            if tag == "Leaf":
                kinds[i] = ("L",)
            elif tag == "J":
                kinds[i] = ("J",)
            else:
                kinds[i] = (tag, int(parts[3]))
        else:
            raise ValueError(f"unknown tag {parts[0]!r}")
    if size is None:
        raise ValueError("missing 'td' header")
    parent_t = tuple(parent.get(i, -1) for i in range(size))
    bags_t = tuple(bags.get(i, frozenset()) for i in range(size))
    if kinds:
        return NiceTreeDecomposition(parent_t, bags_t, kinds=tuple(kinds[i] for i in range(size)))
    return TreeDecomposition(parent_t, bags_t)
