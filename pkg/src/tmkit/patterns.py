"""Enumeration of rooted pattern graphs up to rooted isomorphism.

A pattern with detail budget ``delta`` satisfies
``|E(H)| + is(H) <= delta`` where ``is(H)`` counts degree-zero vertices,
so it has at most ``2*delta`` non-root vertices.  The number of patterns
explodes roughly like ``2^(delta^2)``, hence the enumeration ceiling.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Tuple

from .core import Graph, Pattern, RootedGraph, canonical_form
from .limits import DEFAULT_LIMITS, Limits


def enumerate_patterns(
    root_labels: Iterable[int], delta: int, limits: Limits = DEFAULT_LIMITS
) -> List[Pattern]:
    """All patterns with exactly the given root labels, one per class.

    Every root carries its label; non-root vertices are anonymous.  The
    zero-vertex empty pattern is included (for an empty label set): it is a
    topological minor of every graph, so folios carry it by convention.
    """
    labels = tuple(sorted(set(root_labels)))
    if delta < 1:
        raise ValueError("delta must be positive")
    limits.check("enum_delta", delta)
    limits.check("enum_roots", len(labels))
    return list(_enumerate_cached(labels, delta))


def pattern_universe(
    root_labels: Iterable[int], delta: int, limits: Limits = DEFAULT_LIMITS
) -> List[Pattern]:
    """Patterns over every subset of the given labels (folio candidates)."""
    labels = sorted(set(root_labels))
    out: List[Pattern] = []
    for r in range(len(labels) + 1):
        for subset in itertools.combinations(labels, r):
            out.extend(enumerate_patterns(subset, delta, limits))
    return out


@lru_cache(maxsize=256)
def _enumerate_cached(labels: Tuple[int, ...], delta: int) -> Tuple[Pattern, ...]:
    k = len(labels)
    seen: Dict[bytes, Pattern] = {}
    # Split non-root vertices into isolated ones (only their count matters)
    # and covered ones (each incident to at least one edge).
    for iso in range(delta + 1):
        max_edges = delta - iso
        for covered in range(0, 2 * max_edges + 1):
            n = k + covered + iso
            # Vertices: 0..k-1 roots, k..k+covered-1 covered non-roots,
            # then iso isolated non-roots.
            slots = [
                (a, b)
                for a in range(k + covered)
                for b in range(a + 1, k + covered)
            ]
            for m in range((covered + 1) // 2, max_edges + 1):
                for combo in itertools.combinations(slots, m):
                    g = Graph(n, combo)
                    if any(g.degree(v) == 0 for v in range(k, k + covered)):
                        continue  # covered vertices must have degree >= 1
                    detail = m + sum(1 for v in range(n) if g.degree(v) == 0)
                    if detail > delta:
                        continue
                    rg = RootedGraph(g, {i: labels[i] for i in range(k)})
                    key = canonical_form(rg)
                    if key not in seen:
                        seen[key] = Pattern(rg, delta)
    return tuple(seen[key] for key in sorted(seen))
