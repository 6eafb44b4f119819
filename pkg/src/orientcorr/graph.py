"""Finite simple graphs with named vertices and bit-set vertex subsets."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence, Union

MAX_VERTICES = 64

# A vertex set is a plain int bitmask over dense vertex indices.
VertexSet = int
Vertex = Union[str, int]


class GraphError(ValueError):
    pass


def vset(indices: Iterable[int]) -> VertexSet:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def members(mask: VertexSet) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: VertexSet) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph.

    ``edges`` keeps the endpoint order as given; that order defines the
    "forward" direction of an edge for the oriented models.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        n = len(self.vertices)
        if n > MAX_VERTICES:
            raise GraphError(f"{n} vertices exceeds capacity {MAX_VERTICES}")
        if len(set(self.vertices)) != n:
            raise GraphError("vertex identifiers must be unique")
        seen = set()
        for i, j in self.edges:
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"edge ({i}, {j}) has an endpoint out of range")
            if i == j:
                raise GraphError(f"self-loop at {self.vertices[i]!r}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphError(
                    f"duplicate edge {self.vertices[i]!r} {self.vertices[j]!r}"
                )
            seen.add(key)

    @classmethod
    def from_edges(cls, vertices: Sequence[str], edges: Iterable[tuple[str, str]]) -> Graph:
        index = {v: k for k, v in enumerate(vertices)}
        return cls(tuple(vertices), tuple((index[a], index[b]) for a, b in edges))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def all_vertices(self) -> VertexSet:
        return (1 << self.n) - 1

    def index(self, v: Vertex) -> int:
        """Dense index of ``v``; ints are taken as indices, strings as names."""
        if isinstance(v, int):
            if not 0 <= v < self.n:
                raise GraphError(f"vertex index {v} out of range")
            return v
        try:
            return self.vertices.index(v)
        except ValueError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def vertex_set(self, vs: Iterable[Vertex]) -> VertexSet:
        return vset(self.index(v) for v in vs)

    def names(self, mask: VertexSet) -> list[str]:
        return sorted(self.vertices[i] for i in members(mask))

    def neighbors(self, v: Vertex) -> VertexSet:
        i = self.index(v)
        mask = 0
        for a, b in self.edges:
            if a == i:
                mask |= 1 << b
            elif b == i:
                mask |= 1 << a
        return mask

    def degree(self, v: Vertex) -> int:
        return popcount(self.neighbors(v))

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return bool(self.neighbors(u) >> self.index(v) & 1)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        adj = [self.neighbors(i) for i in range(self.n)]
        seen = frontier = 1
        while frontier:
            nxt = 0
            for i in members(frontier):
                nxt |= adj[i]
            frontier = nxt & ~seen
            seen |= frontier
        return seen == self.all_vertices


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list text format.

    An optional ``vertices: v1 v2 ...`` line (first non-blank line) declares
    vertices up front; every other line is ``u v``.  ``#`` starts a comment.
    """
    vertices: list[str] = []
    known: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    seen_edges: set[tuple[int, int]] = set()
    first = True

    def intern(name: str) -> int:
        if name not in known:
            known[name] = len(vertices)
            vertices.append(name)
        return known[name]

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vertices:"):
            if not first:
                raise GraphError(f"line {lineno}: vertices header must come first")
            first = False
            for name in line[len("vertices:"):].split():
                if name in known:
                    raise GraphError(f"line {lineno}: vertex {name!r} declared twice")
                intern(name)
            continue
        first = False
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
        a, b = parts
        if a == b:
            raise GraphError(f"line {lineno}: self-loop at {a!r}")
        i, j = intern(a), intern(b)
        key = (min(i, j), max(i, j))
        if key in seen_edges:
            raise GraphError(f"line {lineno}: duplicate edge {a} {b}")
        seen_edges.add(key)
        edges.append((i, j))
    return Graph(tuple(vertices), tuple(edges))


def format_edge_list(g: Graph) -> str:
    lines = ["vertices: " + " ".join(g.vertices)]
    lines += [f"{g.vertices[i]} {g.vertices[j]}" for i, j in g.edges]
    return "\n".join(lines) + "\n"


def bunkbed_product(g: Graph) -> Graph:
    """G x K2: two copies of ``g`` plus a vertical edge at every vertex.

    Vertex ``(v, k)`` is named ``f"{v}{k}"`` and has index ``v + k*n``.
    """
    n = g.n
    if n < 1:
        raise GraphError("bunkbed product needs at least one vertex")
    if 2 * n > MAX_VERTICES:
        raise GraphError(f"bunkbed of {n} vertices exceeds capacity {MAX_VERTICES}")
    names = tuple(f"{v}{k}" for k in (0, 1) for v in g.vertices)
    if len(set(names)) != 2 * n:
        names = tuple(f"({v},{k})" for k in (0, 1) for v in g.vertices)
    edges = [(i, j) for i, j in g.edges]
    edges += [(i + n, j + n) for i, j in g.edges]
    edges += [(v, v + n) for v in range(n)]
    return Graph(names, tuple(edges))


def bunkbed_vertex(g: Graph, v: Vertex, level: int) -> int:
    """Index of ``(v, level)`` in ``bunkbed_product(g)``."""
    return g.index(v) + level * g.n


def delete_vertices(g: Graph, s: VertexSet) -> Graph:
    keep = [i for i in range(g.n) if not s >> i & 1]
    new = {old: k for k, old in enumerate(keep)}
    edges = tuple(
        (new[i], new[j]) for i, j in g.edges if i in new and j in new
    )
    return Graph(tuple(g.vertices[i] for i in keep), edges)


def edges_between(g: Graph, s: VertexSet, v: Vertex) -> int:
    i = g.index(v)
    if s >> i & 1:
        raise GraphError(f"vertex {g.vertices[i]!r} is inside the set")
    return popcount(g.neighbors(i) & s)


def enumerate_labeled_graphs(n: int) -> Iterator[Graph]:
    """All labeled simple graphs on v0..v(n-1), ordered by edge bitmask.

    Bit k of the mask selects the k-th pair of ``combinations(range(n), 2)``.
    """
    if not 1 <= n <= 6:
        raise GraphError(f"n={n} out of range 1..6")
    names = tuple(f"v{i}" for i in range(n))
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(names, tuple(p for k, p in enumerate(pairs) if mask >> k & 1))


def connected_graphs(n: int, max_edges: int | None = None) -> Iterator[Graph]:
    for g in enumerate_labeled_graphs(n):
        if (max_edges is None or g.m <= max_edges) and g.is_connected():
            yield g
