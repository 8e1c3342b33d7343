"""Resource ceilings for the exhaustive and DP engines.

Everything in this package is meant to run at desk scale.  The ceilings
below are the single tuning point: operations that would otherwise run
forever on large inputs check them up front and raise ``CeilingExceeded``
instead of silently degrading.
"""

from __future__ import annotations

from dataclasses import dataclass, replace as _dc_replace


class CeilingExceeded(ValueError):
    """An input exceeds one of the configured desk-scale ceilings."""

    def __init__(self, name: str, value: int, limit: int):
        self.name = name
        self.value = value
        self.limit = limit
        super().__init__(f"ceiling '{name}' exceeded: {value} > {limit}")


@dataclass(frozen=True)
class Limits:
    """One record with every ceiling, so CI has a single knob to turn.

    The defaults track what the test suite exercises; raising them is
    allowed but the exhaustive oracles get slow quickly.
    """

    # Pattern enumeration: detail budget and number of root labels.
    enum_delta: int = 4
    enum_roots: int = 4
    # Host size for the brute-force topological-minor search.
    tmc_host: int = 14
    # Host size for the exhaustive disjoint-paths search.
    disjoint_paths_host: int = 30
    disjoint_paths_pairs: int = 4
    # Exhaustive minor-model search.
    minor_pattern: int = 5
    minor_host: int = 14
    # TM-Deletion brute force.
    tmdel_host: int = 12
    tmdel_budget: int = 3
    # (delta,k)-irrelevance oracle.
    irrelevance_host: int = 10
    irrelevance_k: int = 2
    irrelevance_delta: int = 2
    # Exact treewidth: kernel size after safe reductions (subset DP over
    # elimination orderings runs on the kernel, not the raw input).
    treewidth_exact: int = 25
    # Width ceiling for the tree-decomposition DP.
    dp_width: int = 6
    # Canonical-form permutation search (non-root vertices).
    canonical_vertices: int = 12

    def check(self, name: str, value: int) -> None:
        limit = getattr(self, name)
        if value > limit:
            raise CeilingExceeded(name, value, limit)

    def with_overrides(self, **kw: int) -> "Limits":
        return _dc_replace(self, **kw)


DEFAULT_LIMITS = Limits()
