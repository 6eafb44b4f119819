"""Events on world states: cluster-monotone families, predicates, correlation.

Predicates are evaluated in bulk against a :class:`StateTable` and return a
boolean array with one entry per state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .graph import Graph, GraphError, Vertex, VertexSet, members
from .models import (
    CapExceeded,
    EdgeState,
    ModelSpec,
    StateTable,
    WorldState,
    fold_tables,
    full_table,
)

INCREASING_CHECK_MAX_EDGES = 12


class ZeroProbabilityCondition(ValueError):
    pass


def _minimal(sets: Iterable[int]) -> tuple[int, ...]:
    """Antichain of the inclusion-minimal bitmasks, sorted for determinism."""
    out: list[int] = []
    for s in sorted(set(sets), key=lambda x: (bin(x).count("1"), x)):
        if not any(g & s == g for g in out):
            out.append(s)
    return tuple(sorted(out))


class ReachPredicate:
    """Base class; subclasses implement :meth:`mask`."""

    def mask(self, table: StateTable) -> np.ndarray:
        raise NotImplementedError

    def holds(self, g: Graph, model: ModelSpec, state: WorldState) -> bool:
        return bool(self.mask(StateTable.from_states(g, model, [state]))[0])

    def __and__(self, other: ReachPredicate) -> ReachPredicate:
        return And((self, other))

    def __or__(self, other: ReachPredicate) -> ReachPredicate:
        return Or((self, other))

    def __invert__(self) -> ReachPredicate:
        return Not(self)


@dataclass(frozen=True)
class Constant(ReachPredicate):
    value: bool = True

    def mask(self, table):
        return np.full(table.size, self.value, dtype=bool)


TRUE = Constant(True)


@dataclass(frozen=True)
class And(ReachPredicate):
    parts: tuple[ReachPredicate, ...]

    def mask(self, table):
        out = np.ones(table.size, dtype=bool)
        for p in self.parts:
            out &= p.mask(table)
        return out


@dataclass(frozen=True)
class Or(ReachPredicate):
    parts: tuple[ReachPredicate, ...]

    def mask(self, table):
        out = np.zeros(table.size, dtype=bool)
        for p in self.parts:
            out |= p.mask(table)
        return out


@dataclass(frozen=True)
class Not(ReachPredicate):
    inner: ReachPredicate

    def mask(self, table):
        return ~self.inner.mask(table)


@dataclass(frozen=True)
class Reach(ReachPredicate):
    """All of ``targets`` lie in the out-cluster of ``source``."""

    source: int
    targets: VertexSet

    def mask(self, table):
        t = np.uint64(self.targets)
        return (table.out_cluster(self.source) & t) == t


@dataclass(frozen=True)
class InCluster(ReachPredicate):
    """All of ``sources`` lie in the in-cluster of ``sink``."""

    sink: int
    sources: VertexSet

    def mask(self, table):
        t = np.uint64(self.sources)
        return (table.in_cluster(self.sink) & t) == t


@dataclass(frozen=True)
class Avoid(ReachPredicate):
    """The out-cluster of ``source`` misses every vertex of ``avoided``."""

    source: int
    avoided: VertexSet

    def mask(self, table):
        return (table.out_cluster(self.source) & np.uint64(self.avoided)) == 0


@dataclass(frozen=True)
class EdgeIs(ReachPredicate):
    edge: int
    state: EdgeState

    def mask(self, table):
        for code, (s, _) in enumerate(table.model.local_states):
            if s is self.state:
                return table.codes[self.edge] == code
        return np.zeros(table.size, dtype=bool)


@dataclass(frozen=True)
class StateFunction(ReachPredicate):
    """Arbitrary Python predicate on :class:`WorldState` (slow path)."""

    fn: Callable[[WorldState], bool]

    def mask(self, table):
        return np.array([bool(self.fn(table.world_state(k))) for k in range(table.size)], dtype=bool)


@dataclass(frozen=True)
class UpwardClosedFamily(ReachPredicate):
    """Upward-closed family of vertex sets containing ``root``.

    Stored as its antichain of minimal generators; the root is added to
    every generator.  The family is an event on states through the
    out-cluster of the root.
    """

    root: int
    generators: tuple[VertexSet, ...] = field(default=())

    def __post_init__(self):
        r = 1 << self.root
        object.__setattr__(self, "generators", _minimal(g | r for g in self.generators))

    def __contains__(self, s: VertexSet) -> bool:
        return any(g & s == g for g in self.generators)

    def conjoin(self, other: UpwardClosedFamily) -> UpwardClosedFamily:
        if other.root != self.root:
            raise ValueError("families have different roots")
        return UpwardClosedFamily(
            self.root, tuple(a | b for a in self.generators for b in other.generators)
        )

    def disjoin(self, other: UpwardClosedFamily) -> UpwardClosedFamily:
        if other.root != self.root:
            raise ValueError("families have different roots")
        return UpwardClosedFamily(self.root, self.generators + other.generators)

    def mask(self, table):
        c = table.out_cluster(self.root)
        out = np.zeros(table.size, dtype=bool)
        for g in self.generators:
            gu = np.uint64(g)
            out |= (c & gu) == gu
        return out


@dataclass(frozen=True)
class EdgeUpwardFamily(ReachPredicate):
    """Increasing event on the present-edge set of an edge-percolation state."""

    generators: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", _minimal(self.generators))

    @classmethod
    def of_edges(cls, *edge_sets: Iterable[int]) -> EdgeUpwardFamily:
        return cls(tuple(sum(1 << e for e in es) for es in edge_sets))

    def __contains__(self, edge_set: int) -> bool:
        return any(g & edge_set == g for g in self.generators)

    def mask(self, table):
        if table.model.kind != "e":
            raise ValueError("edge events are defined for edge percolation only")
        out = np.zeros(table.size, dtype=bool)
        for g in self.generators:
            ok = np.ones(table.size, dtype=bool)
            for e in members(g):
                ok &= table.codes[e] == 1
            out |= ok
        return out


def make_reachability_family(g: Graph, s: Vertex, targets: Iterable[Vertex] = ()) -> UpwardClosedFamily:
    """The event that every target is reachable from ``s``."""
    return UpwardClosedFamily(g.index(s), (g.vertex_set(targets),))


def family_event_predicate(f: UpwardClosedFamily) -> ReachPredicate:
    return f


def avoidance_predicate(g: Graph, s: Vertex, x: Iterable[Vertex]) -> Avoid:
    si = g.index(s)
    xs = g.vertex_set(x)
    if xs >> si & 1:
        raise GraphError("the avoided set may not contain the source")
    return Avoid(si, xs)


@dataclass(frozen=True)
class CorrelationReport:
    p_a: Fraction
    p_b: Fraction
    p_ab: Fraction
    p_cond: Fraction

    @property
    def covariance(self) -> Fraction:
        return self.p_ab - self.p_a * self.p_b

    @property
    def sign(self) -> str:
        c = self.covariance
        return "positive" if c > 0 else "negative" if c < 0 else "zero"


def correlation_report(
    g: Graph,
    model: ModelSpec,
    a: ReachPredicate,
    b: ReachPredicate,
    cond: ReachPredicate = TRUE,
    max_states: int | None = None,
    threads: int = 1,
) -> CorrelationReport:
    """Exact P(A|C), P(B|C), P(A,B|C) and P(C)."""

    def counts(t: StateTable):
        c = cond.mask(t)
        ma = a.mask(t) & c
        mb = b.mask(t) & c
        return np.array([t.probability(x) for x in (c, ma, mb, ma & mb)], dtype=object)

    pc, pa, pb, pab = fold_tables(
        g, model, counts, lambda x, y: x + y, np.zeros(4, dtype=object) + Fraction(0),
        max_states, threads,
    )
    if pc == 0:
        raise ZeroProbabilityCondition("conditioning event has probability 0")
    return CorrelationReport(pa / pc, pb / pc, pab / pc, pc)


@dataclass(frozen=True)
class IncreasingCheck:
    increasing: bool
    # (larger state, smaller state): cluster of the first contains the
    # cluster of the second, the predicate holds on the second only.
    witness: tuple[WorldState, WorldState] | None = None

    def __bool__(self) -> bool:
        return self.increasing


def is_out_cluster_increasing(g: Graph, s: Vertex, pred: ReachPredicate) -> IncreasingCheck:
    """Check the s-out-cluster increasing property over all orientations.

    Equivalent to the pairwise definition: it fails iff some cluster seen
    with the predicate false contains some cluster seen with it true.
    """
    if g.m > INCREASING_CHECK_MAX_EDGES:
        raise CapExceeded(f"{g.m} edges exceeds the check cap {INCREASING_CHECK_MAX_EDGES}")
    model = ModelSpec.random_orientation()
    t = full_table(g, model)
    cl = t.out_cluster(g.index(s))
    val = pred.mask(t)
    true_at: dict[int, int] = {}
    false_at: dict[int, int] = {}
    for k, (c, v) in enumerate(zip(cl.tolist(), val.tolist())):
        (true_at if v else false_at).setdefault(c, k)
    for cf, kf in sorted(false_at.items()):
        for ct, kt in sorted(true_at.items()):
            if cf & ct == ct:
                return IncreasingCheck(False, (t.world_state(kf), t.world_state(kt)))
    return IncreasingCheck(True)


_KEYWORDS = ("reach:", "avoid:", "in:", "edges:", "and(", "or(", "not(", "true")


def _split_args(body: str) -> list[str]:
    """Split at top-level commas that start a new event (commas also
    separate vertex names inside ``reach:`` and friends)."""
    parts, depth, cur = [], 0, ""
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0 and body[i + 1:].lstrip().startswith(_KEYWORDS):
            parts.append(cur)
            cur = ""
        else:
            cur += ch
        i += 1
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def parse_event(g: Graph, text: str) -> ReachPredicate:
    """Parse an event string.

    Grammar: ``true`` | ``reach:s->a,b`` | ``avoid:s-|t,u`` | ``in:t<-a,b``
    | ``edges:0,2`` | ``and(E, ...)`` | ``or(E, ...)`` | ``not(E)``.
    ``and``/``or`` of reachability families with one common root stay
    families, so they remain usable where an increasing event is required.
    """
    text = text.strip()
    if text == "true":
        return TRUE
    for op in ("and", "or", "not"):
        if text.startswith(op + "(") and text.endswith(")"):
            args = [parse_event(g, a) for a in _split_args(text[len(op) + 1:-1])]
            if not args:
                raise ValueError(f"empty {op}(...)")
            if op == "not":
                if len(args) != 1:
                    raise ValueError("not(...) takes one event")
                return Not(args[0])
            fams = [a for a in args if isinstance(a, UpwardClosedFamily)]
            if len(fams) == len(args) and len({f.root for f in fams}) == 1:
                out = fams[0]
                for f in fams[1:]:
                    out = out.conjoin(f) if op == "and" else out.disjoin(f)
                return out
            return And(tuple(args)) if op == "and" else Or(tuple(args))
    kind, sep, body = text.partition(":")
    if not sep:
        raise ValueError(f"malformed event {text!r}")
    if kind == "reach":
        src, arrow, targets = body.partition("->")
        if not arrow:
            raise ValueError(f"expected 'reach:s->a,b', got {text!r}")
        return make_reachability_family(g, src.strip(), _names(targets))
    if kind == "avoid":
        src, bar, targets = body.partition("-|")
        if not bar:
            raise ValueError(f"expected 'avoid:s-|t', got {text!r}")
        return avoidance_predicate(g, src.strip(), _names(targets))
    if kind == "in":
        sink, arrow, sources = body.partition("<-")
        if not arrow:
            raise ValueError(f"expected 'in:t<-a,b', got {text!r}")
        return InCluster(g.index(sink.strip()), g.vertex_set(_names(sources)))
    if kind == "edges":
        try:
            edges = [int(x) for x in _names(body)]
        except ValueError:
            raise ValueError(f"edge indices must be integers in {text!r}") from None
        for e in edges:
            if not 0 <= e < g.m:
                raise GraphError(f"edge index {e} out of range")
        return EdgeUpwardFamily.of_edges(edges)
    raise ValueError(f"unknown event kind {kind!r}")


def _names(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]
