"""Shared text format for graphs, roots, and embeddings.

Header line ``tm <n>``, then ``e <u> <v>`` per edge, ``r <v> <label>`` per
root, and optional ``f <v1> <v2> ...`` lines listing faces as vertex
cycles (the outer face first).  All indices are 0-based.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .core import Graph, RootedGraph


def dumps(rg: RootedGraph, faces: Optional[Sequence[Sequence[int]]] = None) -> str:
    lines = [f"tm {rg.n}"]
    for u, v in sorted(rg.graph.edges):
        lines.append(f"e {u} {v}")
    for v, lab in sorted(rg.roots.items()):
        lines.append(f"r {v} {lab}")
    for face in faces or ():
        lines.append("f " + " ".join(str(v) for v in face))
    return "\n".join(lines) + "\n"


def loads(text: str) -> Tuple[RootedGraph, List[List[int]]]:
    """Parse the text format; returns the rooted graph and any face lines."""
    n = None
    edges: List[Tuple[int, int]] = []
    roots = {}
    faces: List[List[int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag = parts[0]
        try:
            if tag == "tm":
                if n is not None:
                    raise ValueError("duplicate header")
                n = int(parts[1])
            elif tag == "e":
                edges.append((int(parts[1]), int(parts[2])))
            elif tag == "r":
                roots[int(parts[1])] = int(parts[2])
            elif tag == "f":
                faces.append([int(p) for p in parts[1:]])
            else:
                raise ValueError(f"unknown tag {tag!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    if n is None:
        raise ValueError("missing 'tm <n>' header")
    return RootedGraph(Graph(n, edges), roots), faces


def write_file(path: str, rg: RootedGraph, faces: Optional[Sequence[Sequence[int]]] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(rg, faces))


def read_file(path: str) -> Tuple[RootedGraph, List[List[int]]]:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())
