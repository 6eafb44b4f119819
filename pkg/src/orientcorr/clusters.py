"""Cluster distributions: brute force over the state space, and the
vertex-pivot recursion for edge percolation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Union

import numpy as np

from .exact import check_probability, format_rational
from .graph import Graph, GraphError, Vertex, VertexSet, members, popcount
from .models import ModelSpec, StateTable, fold_tables

SetLike = Union[VertexSet, Iterable[Vertex]]


def _as_set(g: Graph, s: SetLike) -> VertexSet:
    if isinstance(s, int):
        if s >> g.n:
            raise GraphError(f"vertex set {s:#x} has bits beyond {g.n} vertices")
        return s
    return g.vertex_set(s)


def _subsets(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass
class ClusterDistribution:
    """Law of the cluster (E^p) or out-cluster (directed models) of ``root``."""

    graph: Graph
    root: int
    model: str
    probs: dict[VertexSet, Fraction] = field(default_factory=dict)

    def __getitem__(self, key: VertexSet) -> Fraction:
        return self.probs.get(key, Fraction(0))

    def total(self) -> Fraction:
        return sum(self.probs.values(), Fraction(0))

    @property
    def roots(self) -> tuple[int, ...]:
        return (self.root,)

    def to_json(self) -> dict:
        g = self.graph
        rows = sorted(self.probs.items(), key=lambda kv: (popcount(kv[0]), g.names(kv[0])))
        return {
            "model": self.model,
            "root": g.vertices[self.root],
            "law": [{"cluster": g.names(k), "probability": format_rational(v)} for k, v in rows],
        }


@dataclass
class JointClusterDistribution:
    """Joint law of (C_u, C_w) for E^p, (out-cluster of u, in-cluster of w)
    for the directed models.  Keys are (U, W) pairs; overlapping keys occur."""

    graph: Graph
    root_u: int
    root_w: int
    model: str
    probs: dict[tuple[VertexSet, VertexSet], Fraction] = field(default_factory=dict)

    def __getitem__(self, key: tuple[VertexSet, VertexSet]) -> Fraction:
        return self.probs.get(key, Fraction(0))

    def total(self) -> Fraction:
        return sum(self.probs.values(), Fraction(0))

    @property
    def roots(self) -> tuple[int, ...]:
        return (self.root_u, self.root_w)

    def to_json(self) -> dict:
        g = self.graph
        rows = sorted(
            self.probs.items(),
            key=lambda kv: (popcount(kv[0][0]) + popcount(kv[0][1]), g.names(kv[0][0]), g.names(kv[0][1])),
        )
        return {
            "model": self.model,
            "roots": [g.vertices[self.root_u], g.vertices[self.root_w]],
            "law": [
                {"u_cluster": g.names(k[0]), "w_cluster": g.names(k[1]), "probability": format_rational(v)}
                for k, v in rows
            ],
        }


def disjoint_keys(key: tuple[VertexSet, VertexSet]) -> bool:
    return key[0] & key[1] == 0


def _tally(table: StateTable, keys: np.ndarray) -> dict:
    """Exact weight per distinct key column (keys: (k, S) uint64)."""
    cls, weights = table.weight_classes
    stacked = np.vstack([keys, cls.astype(np.uint64)[None, :]])
    uniq, counts = np.unique(stacked, axis=1, return_counts=True)
    out: dict = {}
    for col, c in zip(uniq.T.tolist(), counts.tolist()):
        if not weights[col[-1]]:
            continue  # zero-probability states (p = 0 or 1) are not achievable
        key = col[0] if len(col) == 2 else tuple(col[:-1])
        out[key] = out.get(key, Fraction(0)) + c * weights[col[-1]]
    return out


def _merge(a: dict, b: dict) -> dict:
    for k, v in b.items():
        a[k] = a.get(k, Fraction(0)) + v
    return a


def _merge_all(a: list[dict], b: list[dict]) -> list[dict]:
    return [_merge(x, y) for x, y in zip(a, b)]


def cluster_laws(
    g: Graph, model: ModelSpec, roots: Iterable[Vertex] | None = None,
    max_states: int | None = None, threads: int = 1,
) -> dict[int, ClusterDistribution]:
    """Brute-force laws for several roots from one pass over the states."""
    idx = list(range(g.n)) if roots is None else [g.index(r) for r in roots]
    parts = fold_tables(
        g, model,
        lambda t: [_tally(t, t.out_cluster(u)[None, :]) for u in idx],
        _merge_all, [{} for _ in idx], max_states, threads,
    )
    return {u: ClusterDistribution(g, u, str(model), d) for u, d in zip(idx, parts)}


def cluster_distribution_bruteforce(
    g: Graph, model: ModelSpec, u: Vertex, max_states: int | None = None, threads: int = 1
) -> ClusterDistribution:
    ui = g.index(u)
    return cluster_laws(g, model, [ui], max_states, threads)[ui]


def joint_distribution_bruteforce(
    g: Graph, model: ModelSpec, u: Vertex, w: Vertex,
    max_states: int | None = None, threads: int = 1,
) -> JointClusterDistribution:
    ui, wi = g.index(u), g.index(w)
    return joint_laws(g, model, [(ui, wi)], max_states, threads)[(ui, wi)]


def joint_laws(
    g: Graph, model: ModelSpec, pairs: Iterable[tuple[Vertex, Vertex]],
    max_states: int | None = None, threads: int = 1,
) -> dict[tuple[int, int], JointClusterDistribution]:
    """Brute-force joint laws for several ordered root pairs in one pass."""
    idx = [(g.index(u), g.index(w)) for u, w in pairs]
    if any(u == w for u, w in idx):
        raise GraphError("joint law needs two distinct roots")
    parts = fold_tables(
        g, model,
        lambda t: [_tally(t, np.vstack([t.out_cluster(u), t.in_cluster(w)])) for u, w in idx],
        _merge_all, [{} for _ in idx], max_states, threads,
    )
    return {
        (u, w): JointClusterDistribution(g, u, w, str(model), d)
        for (u, w), d in zip(idx, parts)
    }


class PercolationRecursion:
    """Exact edge-percolation cluster probabilities by pivoting on a vertex.

    Subgraphs are always induced subgraphs of the original graph, so a
    subproblem is keyed by its surviving-vertex mask.  One instance holds
    one memo table and is meant for a single thread.
    """

    def __init__(self, g: Graph, p, pivot: str = "lowest"):
        self.graph = g
        self.p = check_probability(Fraction(p))
        self.q = 1 - self.p
        self.adj = [g.neighbors(i) for i in range(g.n)]
        if pivot not in ("lowest", "highest"):
            raise ValueError(f"unknown pivot rule {pivot!r}")
        self._high = pivot == "highest"
        self.cluster = lru_cache(maxsize=None)(self._cluster)
        self.joint = lru_cache(maxsize=None)(self._joint)

    def _pivot(self, mask: int) -> int:
        return mask.bit_length() - 1 if self._high else (mask & -mask).bit_length() - 1

    def _cluster(self, alive: int, u: int, target: int) -> Fraction:
        """P(C_u = target) in the subgraph induced on ``alive``."""
        if target & ~alive:
            return Fraction(0)
        q, adj = self.q, self.adj
        if target == 1 << u:
            return q ** popcount(adj[u] & alive)
        v = self._pivot(target & ~(1 << u))
        rest = target & ~(1 << u) & ~(1 << v)
        total = Fraction(0)
        for sub in _subsets(rest):
            u1 = sub | 1 << u
            r = popcount(adj[v] & u1)
            if r == 0:
                continue
            left = self.cluster(alive & ~(1 << v), u, u1)
            if left:
                total += left * (1 - q**r) * self.cluster(alive & ~u1, v, target & ~u1)
        return total

    def _joint(self, alive: int, u: int, w: int, tu: int, tw: int) -> Fraction:
        """P(C_u = tu, C_w = tw) for disjoint targets, on ``alive``."""
        if (tu | tw) & ~alive:
            return Fraction(0)
        q, adj = self.q, self.adj
        if tu == 1 << u and tw == 1 << w:
            shared = adj[u] >> w & 1
            return q ** (popcount(adj[u] & alive) + popcount(adj[w] & alive) - shared)
        if tu != 1 << u:
            # pivot inside U
            root, grow, other = u, tu, tw
        else:
            root, grow, other = w, tw, tu
        v = self._pivot(grow & ~(1 << root))
        rest = grow & ~(1 << root) & ~(1 << v)
        # edges from v into the other cluster must all be closed
        closed = q ** popcount(adj[v] & other)
        total = Fraction(0)
        for sub in _subsets(rest):
            g1 = sub | 1 << root
            r = popcount(adj[v] & g1)
            if r == 0:
                continue
            if root == u:
                left = self.joint(alive & ~(1 << v), u, w, g1, tw)
            else:
                left = self.joint(alive & ~(1 << v), u, w, tu, g1)
            if left:
                right = self.cluster(alive & ~(g1 | other), v, grow & ~g1)
                total += left * (1 - q**r) * right * closed
        return total


def cluster_distribution_recursive(g: Graph, u: Vertex, target_u: SetLike, p, pivot: str = "lowest") -> Fraction:
    """P_{E^p}(C_u = target_u) by the pivot recursion."""
    ui = g.index(u)
    tu = _as_set(g, target_u)
    if not tu >> ui & 1:
        raise GraphError("target set must contain the root")
    return PercolationRecursion(g, p, pivot).cluster(g.all_vertices, ui, tu)


def joint_distribution_recursive(
    g: Graph, u: Vertex, w: Vertex, target_u: SetLike, target_w: SetLike, p, pivot: str = "lowest"
) -> Fraction:
    """P_{E^p}(C_u = target_u, C_w = target_w) for disjoint targets."""
    ui, wi = g.index(u), g.index(w)
    tu, tw = _as_set(g, target_u), _as_set(g, target_w)
    if not tu >> ui & 1 or not tw >> wi & 1:
        raise GraphError("each target set must contain its root")
    if tu & tw:
        raise GraphError("target sets overlap")
    return PercolationRecursion(g, p, pivot).joint(g.all_vertices, ui, wi, tu, tw)


def recursive_law(g: Graph, u: Vertex, p, rec: PercolationRecursion | None = None) -> ClusterDistribution:
    """Whole cluster law of ``u`` from the recursion (every U containing u)."""
    ui = g.index(u)
    rec = rec or PercolationRecursion(g, p)
    others = g.all_vertices & ~(1 << ui)
    probs = {}
    for sub in _subsets(others):
        val = rec.cluster(g.all_vertices, ui, sub | 1 << ui)
        if val:
            probs[sub | 1 << ui] = val
    return ClusterDistribution(g, ui, f"recursion:p={format_rational(rec.p)}", probs)


def recursive_joint_law(
    g: Graph, u: Vertex, w: Vertex, p, rec: PercolationRecursion | None = None
) -> JointClusterDistribution:
    """Joint law on all disjoint (U, W) pairs from the recursion."""
    ui, wi = g.index(u), g.index(w)
    if ui == wi:
        raise GraphError("joint law needs two distinct roots")
    rec = rec or PercolationRecursion(g, p)
    others = g.all_vertices & ~(1 << ui) & ~(1 << wi)
    probs = {}
    for su in _subsets(others):
        for sw in _subsets(others & ~su):
            tu, tw = su | 1 << ui, sw | 1 << wi
            val = rec.joint(g.all_vertices, ui, wi, tu, tw)
            if val:
                probs[(tu, tw)] = val
    return JointClusterDistribution(g, ui, wi, f"recursion:p={format_rational(rec.p)}", probs)


@dataclass(frozen=True)
class DiffEntry:
    key: object
    left: Fraction
    right: Fraction


@dataclass(frozen=True)
class DiffReport:
    left: str
    right: str
    entries: tuple[DiffEntry, ...]
    compared: int

    @property
    def equal(self) -> bool:
        return not self.entries

    @property
    def l1(self) -> Fraction:
        return sum((abs(e.left - e.right) for e in self.entries), Fraction(0))


def compare_distributions(
    d1: ClusterDistribution | JointClusterDistribution,
    d2: ClusterDistribution | JointClusterDistribution,
    key_filter: Callable[[object], bool] | None = None,
) -> DiffReport:
    """Keys (passing ``key_filter``) where the two laws differ.  A key
    missing from one side counts as probability 0 there."""
    if type(d1) is not type(d2):
        raise ValueError("cannot compare a single-root law with a joint law")
    if d1.graph != d2.graph:
        raise ValueError("distributions are over different graphs")
    if d1.roots != d2.roots:
        raise ValueError("distributions have different roots")
    keys = sorted(set(d1.probs) | set(d2.probs), key=lambda k: k if isinstance(k, tuple) else (k,))
    if key_filter is not None:
        keys = [k for k in keys if key_filter(k)]
    entries = tuple(DiffEntry(k, d1[k], d2[k]) for k in keys if d1[k] != d2[k])
    return DiffReport(d1.model, d2.model, entries, len(keys))
