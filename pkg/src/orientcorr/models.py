"""The four random-graph models as exhaustive, exactly weighted state spaces.

Every model assigns each edge one of a few local states.  A world state is
the vector of local states; its index is the base-2 (E, O) or base-4 (D,
mixed) number whose digit ``e`` is the local-state code of edge ``e``.

Bulk work goes through :class:`StateTable`, which holds a contiguous range of
states as numpy arrays: per-edge codes, the out-cluster bitmask of every
vertex, and an index into the distinct exact weights of the range.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Protocol

import numpy as np

from .exact import check_probability, format_rational, parse_rational
from .graph import Graph, Vertex, VertexSet

DEFAULT_MAX_STATES = 1 << 24
CHUNK_STATES = 1 << 16
HALF = Fraction(1, 2)


class CapExceeded(ValueError):
    pass


class EdgeState(enum.Enum):
    ABSENT = "absent"
    PRESENT = "present"  # undirected edge, traversable both ways
    FORWARD = "forward"  # arc from the first stored endpoint to the second
    BACKWARD = "backward"
    BOTH_ARCS = "both"  # D^p: both opposite arcs present

    @property
    def arcs(self) -> int:
        """Bit 0: forward arc usable, bit 1: backward arc usable."""
        return _ARCS[self]

    def reversed(self) -> EdgeState:
        return _REVERSED.get(self, self)


_ARCS = {
    EdgeState.ABSENT: 0,
    EdgeState.PRESENT: 3,
    EdgeState.FORWARD: 1,
    EdgeState.BACKWARD: 2,
    EdgeState.BOTH_ARCS: 3,
}
_REVERSED = {EdgeState.FORWARD: EdgeState.BACKWARD, EdgeState.BACKWARD: EdgeState.FORWARD}


@dataclass(frozen=True)
class ModelSpec:
    """One of ``e`` (edge percolation), ``o`` (random orientation),
    ``d`` (directed edge percolation) or ``mixed`` (random split between an
    undirected percolation edge and a uniformly oriented edge)."""

    kind: str
    p: Fraction | None = None
    p_prime: Fraction | None = None
    p1: Fraction | None = None

    def __post_init__(self):
        if self.kind in ("e", "d"):
            if self.p is None:
                raise ValueError(f"model {self.kind!r} needs p")
            object.__setattr__(self, "p", check_probability(self.p))
        elif self.kind == "mixed":
            if self.p_prime is None or self.p1 is None:
                raise ValueError("mixed model needs pp and p1")
            object.__setattr__(self, "p_prime", check_probability(self.p_prime, "pp"))
            object.__setattr__(self, "p1", check_probability(self.p1, "p1"))
        elif self.kind != "o":
            raise ValueError(f"unknown model kind {self.kind!r}")

    @classmethod
    def edge_percolation(cls, p) -> ModelSpec:
        return cls("e", p=Fraction(p))

    @classmethod
    def random_orientation(cls) -> ModelSpec:
        return cls("o")

    @classmethod
    def directed_percolation(cls, p) -> ModelSpec:
        return cls("d", p=Fraction(p))

    @classmethod
    def mixed(cls, p_prime, p1) -> ModelSpec:
        return cls("mixed", p_prime=Fraction(p_prime), p1=Fraction(p1))

    @property
    def directed(self) -> bool:
        return self.kind != "e"

    @property
    def base(self) -> int:
        return 2 if self.kind in ("e", "o") else 4

    @property
    def local_states(self) -> tuple[tuple[EdgeState, Fraction], ...]:
        """(state, probability) per local-state code; code bits equal arc bits
        for the base-4 models."""
        if self.kind == "e":
            return ((EdgeState.ABSENT, 1 - self.p), (EdgeState.PRESENT, self.p))
        if self.kind == "o":
            return ((EdgeState.FORWARD, HALF), (EdgeState.BACKWARD, HALF))
        if self.kind == "d":
            p, q = self.p, 1 - self.p
            return (
                (EdgeState.ABSENT, q * q),
                (EdgeState.FORWARD, p * q),
                (EdgeState.BACKWARD, q * p),
                (EdgeState.BOTH_ARCS, p * p),
            )
        pp, p1 = self.p_prime, self.p1
        return (
            (EdgeState.ABSENT, pp * (1 - p1)),
            (EdgeState.FORWARD, (1 - pp) / 2),
            (EdgeState.BACKWARD, (1 - pp) / 2),
            (EdgeState.PRESENT, pp * p1),
        )

    def num_states(self, m: int) -> int:
        return self.base**m

    def __str__(self) -> str:
        if self.kind == "o":
            return "o"
        if self.kind == "mixed":
            return f"mixed:pp={format_rational(self.p_prime)},p1={format_rational(self.p1)}"
        return f"{self.kind}:p={format_rational(self.p)}"


def parse_model(text: str) -> ModelSpec:
    """Parse ``"e:p=1/2"``, ``"o"``, ``"d:p=1/3"`` or ``"mixed:pp=1/3,p1=1/2"``."""
    kind, _, rest = text.strip().partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"malformed model parameter {item!r}")
            params[key.strip()] = parse_rational(val)
    allowed = {"e": {"p"}, "d": {"p"}, "o": set(), "mixed": {"pp", "p1"}}
    if kind not in allowed:
        raise ValueError(f"unknown model {kind!r}")
    if set(params) != allowed[kind]:
        raise ValueError(f"model {kind!r} takes parameters {sorted(allowed[kind])}")
    if kind == "mixed":
        return ModelSpec.mixed(params["pp"], params["p1"])
    return ModelSpec(kind, p=params.get("p"))


def dp_split_parameters(p) -> tuple[Fraction, Fraction]:
    """Mixed-model parameters (pp, p1) that reproduce D^p."""
    p = check_probability(Fraction(p))
    pp = 1 - 2 * p * (1 - p)
    return pp, p * p / pp


@dataclass(frozen=True)
class WorldState:
    edge_states: tuple[EdgeState, ...]
    weight: Fraction
    index: int = -1

    def reversed(self) -> WorldState:
        return WorldState(tuple(s.reversed() for s in self.edge_states), self.weight, -1)


def check_cap(g: Graph, model: ModelSpec, max_states: int | None) -> int:
    total = model.num_states(g.m)
    cap = DEFAULT_MAX_STATES if max_states is None else max_states
    if total > cap:
        raise CapExceeded(
            f"model {model} on {g.m} edges has {total} states, cap is {cap}"
        )
    return total


def enumerate_states(
    g: Graph, model: ModelSpec, max_states: int | None = None
) -> Iterator[WorldState]:
    total = check_cap(g, model, max_states)
    local = model.local_states
    base = model.base
    for idx in range(total):
        states = []
        weight = Fraction(1)
        rest = idx
        for _ in range(g.m):
            state, w = local[rest % base]
            rest //= base
            states.append(state)
            weight *= w
        yield WorldState(tuple(states), weight, idx)


def _traverse(g: Graph, state: WorldState, u: Vertex, reverse: bool) -> VertexSet:
    start = g.index(u)
    out = [[] for _ in range(g.n)]
    for (i, j), s in zip(g.edges, state.edge_states):
        arcs = s.arcs
        if reverse:
            arcs = (arcs >> 1) | ((arcs & 1) << 1)
        if arcs & 1:
            out[i].append(j)
        if arcs & 2:
            out[j].append(i)
    seen = 1 << start
    queue = [start]
    while queue:
        x = queue.pop()
        for y in out[x]:
            if not seen >> y & 1:
                seen |= 1 << y
                queue.append(y)
    return seen


def out_cluster(g: Graph, state: WorldState, u: Vertex) -> VertexSet:
    """Vertices reachable from ``u``; for E^p states this is the cluster of u."""
    return _traverse(g, state, u, reverse=False)


def in_cluster(g: Graph, state: WorldState, u: Vertex) -> VertexSet:
    return _traverse(g, state, u, reverse=True)


_ONE = np.uint64(1)


class StateTable:
    """A batch of world states evaluated in bulk.

    ``reach[v]`` is the out-cluster bitmask of vertex ``v`` in every state.
    ``weight_index`` points into ``weights``, the distinct exact weights.
    """

    def __init__(self, g: Graph, model: ModelSpec, codes: np.ndarray, start: int = 0):
        self.graph = g
        self.model = model
        self.codes = codes
        self.start = start
        self.size = codes.shape[1] if codes.ndim == 2 else 0
        self.reach = self._closure()
        self._weights: tuple[np.ndarray, list[Fraction]] | None = None
        self._in: dict[int, np.ndarray] = {}

    @classmethod
    def for_range(cls, g: Graph, model: ModelSpec, start: int, stop: int) -> StateTable:
        idx = np.arange(start, stop, dtype=np.uint64)
        shift = 1 if model.base == 2 else 2
        digit = np.uint64(model.base - 1)
        codes = np.empty((g.m, stop - start), dtype=np.uint8)
        for e in range(g.m):
            codes[e] = (idx >> np.uint64(shift * e)) & digit
        return cls(g, model, codes, start)

    @classmethod
    def from_states(cls, g: Graph, model: ModelSpec, states: list[WorldState]) -> StateTable:
        lookup = {s: c for c, (s, _) in enumerate(model.local_states)}
        codes = np.array(
            [[lookup[st.edge_states[e]] for st in states] for e in range(g.m)],
            dtype=np.uint8,
        ).reshape(g.m, len(states))
        return cls(g, model, codes)

    def _closure(self) -> np.ndarray:
        g = self.graph
        lut = np.array([s.arcs for s, _ in self.model.local_states], dtype=np.uint8)
        arcs = lut[self.codes] if g.m else self.codes
        reach = np.zeros((g.n, self.size), dtype=np.uint64)
        for v in range(g.n):
            reach[v] = _ONE << np.uint64(v)
        for e, (i, j) in enumerate(g.edges):
            a = arcs[e].astype(np.uint64)
            reach[i] |= (a & _ONE) << np.uint64(j)
            reach[j] |= ((a >> _ONE) & _ONE) << np.uint64(i)
        # Warshall on bit rows.
        for k in range(g.n):
            has_k = ((reach >> np.uint64(k)) & _ONE).astype(bool)
            reach |= np.where(has_k, reach[k][None, :], np.uint64(0))
        return reach

    def out_cluster(self, v: int) -> np.ndarray:
        return self.reach[v]

    def in_cluster(self, v: int) -> np.ndarray:
        if v not in self._in:
            acc = np.zeros(self.size, dtype=np.uint64)
            bit = np.uint64(v)
            for x in range(self.graph.n):
                acc |= ((self.reach[x] >> bit) & _ONE) << np.uint64(x)
            self._in[v] = acc
        return self._in[v]

    def reaches(self, src: int, dst: int) -> np.ndarray:
        return ((self.reach[src] >> np.uint64(dst)) & _ONE).astype(bool)

    @property
    def weight_classes(self) -> tuple[np.ndarray, list[Fraction]]:
        if self._weights is None:
            local = self.model.local_states
            m = self.graph.m
            key = np.zeros(self.size, dtype=np.int64)
            for c in range(len(local)):
                key += (self.codes == c).sum(axis=0, dtype=np.int64) * (m + 1) ** c
            keys, inverse = np.unique(key, return_inverse=True)
            distinct: dict[Fraction, int] = {}
            remap = np.empty(len(keys), dtype=np.int64)
            for k, kv in enumerate(keys.tolist()):
                w = Fraction(1)
                for c, (_, pc) in enumerate(local):
                    w *= pc ** ((kv // (m + 1) ** c) % (m + 1))
                remap[k] = distinct.setdefault(w, len(distinct))
            self._weights = (remap[inverse.reshape(-1)], list(distinct))
        return self._weights

    def class_counts(self, mask: np.ndarray) -> np.ndarray:
        index, weights = self.weight_classes
        return np.bincount(index[mask], minlength=len(weights))

    def probability(self, mask: np.ndarray) -> Fraction:
        _, weights = self.weight_classes
        counts = self.class_counts(np.asarray(mask, dtype=bool))
        return sum((int(c) * w for c, w in zip(counts, weights) if c), Fraction(0))

    def weigh(self, counts: np.ndarray) -> Fraction:
        """Exact value of a per-class count vector (last axis = classes)."""
        _, weights = self.weight_classes
        return sum((int(c) * w for c, w in zip(counts, weights) if c), Fraction(0))

    def world_state(self, k: int) -> WorldState:
        local = self.model.local_states
        states = tuple(local[int(c)][0] for c in self.codes[:, k])
        weight = math.prod((local[int(c)][1] for c in self.codes[:, k]), start=Fraction(1))
        return WorldState(states, weight, self.start + k)


class Predicate(Protocol):
    def mask(self, table: StateTable) -> np.ndarray: ...


def iter_tables(
    g: Graph,
    model: ModelSpec,
    max_states: int | None = None,
    chunk: int = CHUNK_STATES,
) -> Iterator[StateTable]:
    total = check_cap(g, model, max_states)
    for start in range(0, total, chunk):
        yield StateTable.for_range(g, model, start, min(total, start + chunk))


def full_table(g: Graph, model: ModelSpec, max_states: int | None = None) -> StateTable:
    """The whole state space as a single table (small graphs only)."""
    total = check_cap(g, model, max_states)
    return StateTable.for_range(g, model, 0, total)


def fold_tables(
    g: Graph,
    model: ModelSpec,
    fn: Callable[[StateTable], object],
    combine: Callable[[object, object], object],
    initial,
    max_states: int | None = None,
    threads: int = 1,
):
    """Fold ``fn`` over disjoint chunks of the state space."""
    total = check_cap(g, model, max_states)
    starts = range(0, total, CHUNK_STATES)

    def run(start):
        return fn(StateTable.for_range(g, model, start, min(total, start + CHUNK_STATES)))

    acc = initial
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(threads) as pool:
            for part in pool.map(run, starts):
                acc = combine(acc, part)
    else:
        for start in starts:
            acc = combine(acc, run(start))
    return acc


def event_probability(
    g: Graph,
    model: ModelSpec,
    pred: Predicate,
    max_states: int | None = None,
    threads: int = 1,
) -> Fraction:
    return fold_tables(
        g,
        model,
        lambda t: t.probability(pred.mask(t)),
        lambda a, b: a + b,
        Fraction(0),
        max_states,
        threads,
    )
