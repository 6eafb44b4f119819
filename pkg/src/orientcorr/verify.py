"""Exact checks of the cluster-law identities and correlation inequalities,
plus exhaustive sweep drivers over small graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

from .clusters import (
    ClusterDistribution,
    DiffReport,
    PercolationRecursion,
    cluster_laws,
    compare_distributions,
    disjoint_keys,
    joint_laws,
    recursive_joint_law,
    recursive_law,
)
from .events import (
    Avoid,
    Reach,
    EdgeUpwardFamily,
    ReachPredicate,
    UpwardClosedFamily,
    ZeroProbabilityCondition,
)
from .exact import format_rational
from .graph import (
    Graph,
    GraphError,
    Vertex,
    VertexSet,
    bunkbed_product,
    bunkbed_vertex,
    connected_graphs,
    enumerate_labeled_graphs,
    members,
)
from .models import (
    HALF,
    ModelSpec,
    StateTable,
    dp_split_parameters,
    fold_tables,
    full_table,
)

O = ModelSpec.random_orientation()


def graph_json(g: Graph) -> dict:
    return {"vertices": list(g.vertices), "edges": [[g.vertices[i], g.vertices[j]] for i, j in g.edges]}


@dataclass
class InequalityReport:
    """One exact comparison.  ``relation`` reads ``lhs <relation> rhs``.

    Equality checks between laws put the L1 distance in ``lhs`` and 0 in
    ``rhs`` and keep the per-key differences in ``diff``.
    """

    name: str
    instance: dict
    lhs: Fraction
    rhs: Fraction
    relation: str = "<="
    diff: DiffReport | None = None
    conjecture: bool = False
    notes: dict = field(default_factory=dict)
    graph: Graph | None = field(default=None, repr=False)

    @property
    def margin(self) -> Fraction:
        if self.relation == "<=":
            return self.rhs - self.lhs
        if self.relation == ">=":
            return self.lhs - self.rhs
        return -abs(self.lhs - self.rhs)

    @property
    def holds(self) -> bool:
        return self.margin == 0 if self.relation == "==" else self.margin >= 0

    def to_json(self) -> dict:
        out = {
            "kind": "inequality",
            "name": self.name,
            "instance": self.instance,
            "relation": self.relation,
            "lhs": format_rational(self.lhs),
            "rhs": format_rational(self.rhs),
            "margin": format_rational(self.margin),
            "holds": self.holds,
        }
        if self.conjecture:
            out["conjecture"] = True
        if self.diff is not None:
            out["diff"] = diff_json(self.diff, self.graph)
        if self.notes:
            out["notes"] = {k: format_rational(v) if isinstance(v, Fraction) else v for k, v in self.notes.items()}
        return out


def diff_json(d: DiffReport, g: Graph | None = None) -> dict:
    def key(k):
        if g is None:
            return k
        if isinstance(k, tuple):
            return [g.names(x) for x in k]
        return g.names(k)

    return {
        "left": d.left,
        "right": d.right,
        "compared": d.compared,
        "differences": [
            {"key": key(e.key), "left": format_rational(e.left), "right": format_rational(e.right)}
            for e in d.entries
        ],
    }


def _equality(name: str, g: Graph, instance: dict, d: DiffReport) -> InequalityReport:
    return InequalityReport(name, instance, d.l1, Fraction(0), "==", d, graph=g)


def _instance(g: Graph, **bindings) -> dict:
    out = {"graph": graph_json(g)}
    for k, v in bindings.items():
        if isinstance(v, Fraction):
            out[k] = format_rational(v)
        else:
            out[k] = v
    return out


def _law_comparisons(
    name: str, g: Graph, instance: dict, laws: dict[str, object], pairs: list[tuple[str, str]], key_filter=None
) -> list[InequalityReport]:
    return [
        _equality(f"{name}:{a}={b}", g, instance, compare_distributions(laws[a], laws[b], key_filter))
        for a, b in pairs
    ]


def _lemma1_pairs(p: Fraction) -> tuple[list[str], list[tuple[str, str]]]:
    if p == HALF:
        names = ["E", "O", "D", "recursion"]
        return names, [("E", "O"), ("E", "D"), ("O", "D"), ("recursion", "E"), ("recursion", "O"), ("recursion", "D")]
    return ["E", "D", "recursion"], [("E", "D"), ("recursion", "E"), ("recursion", "D")]


def _models_for(p: Fraction) -> dict[str, ModelSpec]:
    models = {"E": ModelSpec.edge_percolation(p), "D": ModelSpec.directed_percolation(p)}
    if p == HALF:
        models["O"] = O
    return models


def verify_lemma1(
    g: Graph, u: Vertex, p, max_states: int | None = None, threads: int = 1,
    roots: Iterable[Vertex] | None = None,
) -> list[InequalityReport]:
    """Cluster law of ``u``: E^p vs D^p vs recursion (and O when p = 1/2).

    ``roots`` overrides ``u`` to check several roots from one enumeration.
    """
    p = Fraction(p)
    idx = [g.index(u)] if roots is None else [g.index(r) for r in roots]
    names, pairs = _lemma1_pairs(p)
    per_model = {k: cluster_laws(g, m, idx, max_states, threads) for k, m in _models_for(p).items()}
    rec = PercolationRecursion(g, p)
    reports = []
    for ui in idx:
        laws = {k: per_model[k][ui] for k in per_model}
        laws["recursion"] = recursive_law(g, ui, p, rec)
        inst = _instance(g, u=g.vertices[ui], p=p)
        reports += _law_comparisons("lemma1", g, inst, laws, pairs)
    return reports


def verify_lemma2(
    g: Graph, u: Vertex, w: Vertex, p, max_states: int | None = None, threads: int = 1,
    pairs: Iterable[tuple[Vertex, Vertex]] | None = None,
) -> list[InequalityReport]:
    """Joint law of (C_u, C_w) vs (out-cluster of u, in-cluster of w) on
    disjoint keys."""
    p = Fraction(p)
    if pairs is None:
        idx = [(g.index(u), g.index(w))]
    else:
        idx = [(g.index(a), g.index(b)) for a, b in pairs]
    if any(a == b for a, b in idx):
        raise GraphError("joint law needs two distinct roots")
    _, cmp_pairs = _lemma1_pairs(p)
    per_model = {k: joint_laws(g, m, idx, max_states, threads) for k, m in _models_for(p).items()}
    rec = PercolationRecursion(g, p)
    reports = []
    for ui, wi in idx:
        laws = {k: per_model[k][(ui, wi)] for k in per_model}
        laws["recursion"] = recursive_joint_law(g, ui, wi, p, rec)
        inst = _instance(g, u=g.vertices[ui], w=g.vertices[wi], p=p)
        reports += _law_comparisons("lemma2", g, inst, laws, cmp_pairs, disjoint_keys)
    return reports


def _root_check(s: int, *families: UpwardClosedFamily):
    for f in families:
        if f.root != s:
            raise ValueError(f"family rooted at {f.root}, expected {s}")


def _family_json(g: Graph, f: UpwardClosedFamily) -> list[list[str]]:
    return [g.names(x) for x in f.generators]


def verify_oriented_harris(
    g: Graph, s: Vertex, a: UpwardClosedFamily, b: UpwardClosedFamily,
    max_states: int | None = None, threads: int = 1,
) -> InequalityReport:
    """P_O(A) P_O(B) <= P_O(A, B) for s-out-cluster increasing A, B."""
    si = g.index(s)
    _root_check(si, a, b)
    pa, pb, pab = _probabilities(g, O, [a, b, a & b], max_states, threads)
    return InequalityReport(
        "oriented-harris",
        _instance(g, s=g.vertices[si], a=_family_json(g, a), b=_family_json(g, b)),
        pa * pb, pab,
    )


def verify_oriented_vdbhk(
    g: Graph, s: Vertex, a: UpwardClosedFamily, b: UpwardClosedFamily,
    x: Iterable[Vertex] | VertexSet, y: Iterable[Vertex] | VertexSet,
    max_states: int | None = None, threads: int = 1,
) -> InequalityReport:
    """P(A, C_s∩X=∅) P(B, C_s∩Y=∅) <= P(A, B, C_s∩X∩Y=∅) P(C_s∩(X∪Y)=∅)
    in model O, C_s being the out-cluster of s."""
    si = g.index(s)
    xs = x if isinstance(x, int) else g.vertex_set(x)
    ys = y if isinstance(y, int) else g.vertex_set(y)
    if (xs | ys) >> si & 1:
        raise GraphError("X and Y may not contain s")
    _root_check(si, a, b)
    preds = [a & Avoid(si, xs), b & Avoid(si, ys), a & b & Avoid(si, xs & ys), Avoid(si, xs | ys)]
    p1, p2, p3, p4 = _probabilities(g, O, preds, max_states, threads)
    return InequalityReport(
        "oriented-vdbhk",
        _instance(
            g, s=g.vertices[si], a=_family_json(g, a), b=_family_json(g, b),
            x=g.names(xs), y=g.names(ys),
        ),
        p1 * p2, p3 * p4,
    )


def _probabilities(g, model, preds: list[ReachPredicate], max_states=None, threads=1) -> list[Fraction]:
    def part(t: StateTable):
        return [t.probability(p.mask(t)) for p in preds]

    return fold_tables(
        g, model, part, lambda x, y: [i + j for i, j in zip(x, y)],
        [Fraction(0)] * len(preds), max_states, threads,
    )


def verify_corollaries(
    g: Graph, s: Vertex, a: Vertex, b: Vertex, t: Vertex,
    max_states: int | None = None, threads: int = 1,
) -> list[InequalityReport]:
    """The two-path inequality, its version conditioned on s not reaching t,
    and the conditioned negative correlation of {a -> t} and {s -> b}."""
    si, ai, bi, ti = (g.index(v) for v in (s, a, b, t))
    if si == ti:
        raise ZeroProbabilityCondition("conditioning on s not reaching s is the empty event")
    sa, sb, at = Reach(si, 1 << ai), Reach(si, 1 << bi), Reach(ai, 1 << ti)
    cond = Avoid(si, 1 << ti)
    pa, pb, pab, pc, pac, pbc, pabc, patc, patbc = _probabilities(
        g, O,
        [sa, sb, sa & sb, cond, sa & cond, sb & cond, sa & sb & cond, at & cond, at & sb & cond],
        max_states, threads,
    )
    if pc == 0:
        raise ZeroProbabilityCondition("P(s does not reach t) = 0")
    inst = _instance(g, s=g.vertices[si], a=g.vertices[ai], b=g.vertices[bi], t=g.vertices[ti])
    return [
        InequalityReport("two-paths", inst, pa * pb, pab),
        InequalityReport("two-paths-conditioned", inst, (pac / pc) * (pbc / pc), pabc / pc),
        InequalityReport("in-out-negative-conditioned", inst, (patc / pc) * (pbc / pc), patbc / pc, ">="),
    ]


def verify_harris_classical(
    g: Graph, p, a: EdgeUpwardFamily, b: EdgeUpwardFamily,
    max_states: int | None = None, threads: int = 1,
) -> InequalityReport:
    p = Fraction(p)
    pa, pb, pab = _probabilities(g, ModelSpec.edge_percolation(p), [a, b, a & b], max_states, threads)
    return InequalityReport(
        "harris",
        _instance(g, p=p, a=[members(x) for x in a.generators], b=[members(x) for x in b.generators]),
        pa * pb, pab,
    )


def bunkbed_check(
    g: Graph, u: Vertex, v: Vertex, p, max_states: int | None = None, threads: int = 1,
) -> InequalityReport:
    """P((v,0) in C_(u,0)) >= P((v,1) in C_(u,0)) on G x K2 under E^p.

    At p = 1/2 both sides are recomputed as reachability probabilities in
    model O on the bunkbed graph; ``notes['crosscheck']`` records agreement.
    """
    p = Fraction(p)
    bb = bunkbed_product(g)
    src = bunkbed_vertex(g, u, 0)
    low, high = bunkbed_vertex(g, v, 0), bunkbed_vertex(g, v, 1)
    preds = [Reach(src, 1 << low), Reach(src, 1 << high)]
    lhs, rhs = _probabilities(bb, ModelSpec.edge_percolation(p), preds, max_states, threads)
    rep = InequalityReport(
        "bunkbed",
        _instance(g, u=g.vertices[g.index(u)], v=g.vertices[g.index(v)], p=p),
        lhs, rhs, ">=", conjecture=True,
    )
    if p == HALF:
        o_lhs, o_rhs = _probabilities(bb, O, preds, max_states, threads)
        rep.notes.update(o_lhs=o_lhs, o_rhs=o_rhs, crosscheck=(o_lhs, o_rhs) == (lhs, rhs))
    return rep


def verify_mixed_model(
    g: Graph, u: Vertex, p_prime, p, max_states: int | None = None, threads: int = 1,
    roots: Iterable[Vertex] | None = None,
) -> list[InequalityReport]:
    """Mixed(pp, 1/2) out-cluster law vs O, and Mixed(split(p)) vs D^p."""
    p_prime, p = Fraction(p_prime), Fraction(p)
    idx = [g.index(u)] if roots is None else [g.index(r) for r in roots]
    pp2, p1 = dp_split_parameters(p)
    mixed_half = cluster_laws(g, ModelSpec.mixed(p_prime, HALF), idx, max_states, threads)
    o_laws = cluster_laws(g, O, idx, max_states, threads)
    mixed_dp = cluster_laws(g, ModelSpec.mixed(pp2, p1), idx, max_states, threads)
    d_laws = cluster_laws(g, ModelSpec.directed_percolation(p), idx, max_states, threads)
    reports = []
    for ui in idx:
        inst = _instance(g, u=g.vertices[ui], pp=p_prime, p=p)
        reports.append(_equality("mixed-half=O", g, inst, compare_distributions(mixed_half[ui], o_laws[ui])))
        reports.append(_equality("mixed-split=D", g, inst, compare_distributions(mixed_dp[ui], d_laws[ui])))
    return reports


@dataclass
class SignFinding:
    graph: Graph
    bindings: dict[str, str]
    covariance: Fraction
    mode: str
    conditioned: bool

    @property
    def sign(self) -> str:
        return "positive" if self.covariance > 0 else "negative" if self.covariance < 0 else "zero"

    def to_json(self) -> dict:
        return {
            "kind": "sign",
            "mode": self.mode,
            "conditioned": self.conditioned,
            "graph": graph_json(self.graph),
            "bindings": self.bindings,
            "covariance": format_rational(self.covariance),
            "sign": self.sign,
        }


SIGN_MODES = ("a_to_s", "a_in_in_cluster_t")


def _reach_matrix(t: StateTable) -> np.ndarray:
    """R[x, y, k]: y is reachable from x in state k."""
    n = t.graph.n
    R = np.empty((n, n, t.size), dtype=bool)
    for x in range(n):
        for y in range(n):
            R[x, y] = t.reaches(x, y)
    return R


def search_correlation_signs(n: int, mode: str = "a_to_s", conditioned: bool = False) -> list[SignFinding]:
    """Covariance signs in model O over every labeled graph on ``n`` vertices.

    ``a_to_s``: events {a -> s} and {s -> b}.
    ``a_in_in_cluster_t``: events {a in in-cluster of t} and {b in
    out-cluster of s}.
    Conditioned sweeps condition on {s does not reach t}, t != s, and skip
    bindings where that event is impossible.  Only nonzero covariances are
    returned, in deterministic (graph, binding) order.
    """
    if not 1 <= n <= 5:
        raise ValueError(f"n={n} out of range 1..5")
    if mode not in SIGN_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    findings = []
    for g in enumerate_labeled_graphs(n):
        t = full_table(g, O)
        R = _reach_matrix(t).astype(np.int64)
        for s in range(n):
            B = R[s]  # B[b]: s -> b
            if mode == "a_to_s":
                cases = [(tt, R[:, s, :]) for tt in range(n) if tt != s] if conditioned else [(None, R[:, s, :])]
            else:
                cases = [(tt, R[:, tt, :]) for tt in range(n) if not (conditioned and tt == s)]
            for tt, A in cases:
                if conditioned:
                    cond = 1 - R[s, tt]
                    cc = int(cond.sum())
                    if cc == 0:
                        continue
                    Ac, Bc = A * cond, B * cond
                else:
                    cc, Ac, Bc = t.size, A, B
                ca, cb, cab = Ac.sum(axis=1), Bc.sum(axis=1), Ac @ Bc.T
                for a in range(n):
                    for b in range(n):
                        num = int(cab[a, b]) * cc - int(ca[a]) * int(cb[b])
                        if num == 0:
                            continue
                        bind = {"a": g.vertices[a], "b": g.vertices[b], "s": g.vertices[s]}
                        if tt is not None:
                            bind["t"] = g.vertices[tt]
                        findings.append(SignFinding(g, bind, Fraction(num, cc * cc), mode, conditioned))
    return findings


# ---------------------------------------------------------------------------
# Sweep drivers


@dataclass
class SweepResult:
    name: str
    checked: int = 0
    held: int = 0
    skipped: int = 0
    violations: list = field(default_factory=list)

    def record(self, ok: bool, detail=None):
        self.checked += 1
        if ok:
            self.held += 1
        else:
            self.violations.append(detail)

    @property
    def ok(self) -> bool:
        return not self.violations and self.checked > 0

    def to_json(self) -> dict:
        return {
            "kind": "sweep",
            "name": self.name,
            "checked": self.checked,
            "held": self.held,
            "violated": len(self.violations),
            "skipped": self.skipped,
            "violations": [v.to_json() if hasattr(v, "to_json") else v for v in self.violations],
        }


def graphs_up_to(n_max: int, max_edges: int | None = None, connected: bool = True) -> Iterator[Graph]:
    for n in range(1, n_max + 1):
        if connected:
            yield from connected_graphs(n, max_edges)
        else:
            for g in enumerate_labeled_graphs(n):
                if max_edges is None or g.m <= max_edges:
                    yield g


def sweep_lemma1(n_max: int, ps: Iterable, max_edges: int | None = None) -> SweepResult:
    res = SweepResult("lemma1")
    for p in ps:
        for g in graphs_up_to(n_max, max_edges):
            for r in verify_lemma1(g, 0, p, roots=range(g.n)):
                res.record(r.holds, r)
    return res


def sweep_lemma2(n_max: int, ps: Iterable, max_edges: int | None = None) -> SweepResult:
    res = SweepResult("lemma2")
    for p in ps:
        for g in graphs_up_to(n_max, max_edges):
            pairs = [(a, b) for a in range(g.n) for b in range(g.n) if a != b]
            if not pairs:
                continue
            for r in verify_lemma2(g, 0, 1, p, pairs=pairs):
                res.record(r.holds, r)
    return res


def sweep_mixed(n_max: int, p_primes: Iterable, ps: Iterable) -> SweepResult:
    res = SweepResult("mixed")
    p_primes, ps = list(p_primes), list(ps)
    for g in graphs_up_to(n_max):
        roots = range(g.n)
        o_laws = cluster_laws(g, O, roots)
        for pp in p_primes:
            laws = cluster_laws(g, ModelSpec.mixed(pp, HALF), roots)
            for u in roots:
                d = compare_distributions(laws[u], o_laws[u])
                res.record(d.equal, _equality("mixed-half=O", g, _instance(g, u=g.vertices[u], pp=Fraction(pp)), d))
        for p in ps:
            laws = cluster_laws(g, ModelSpec.mixed(*dp_split_parameters(p)), roots)
            d_laws = cluster_laws(g, ModelSpec.directed_percolation(p), roots)
            for u in roots:
                d = compare_distributions(laws[u], d_laws[u])
                res.record(d.equal, _equality("mixed-split=D", g, _instance(g, u=g.vertices[u], p=Fraction(p)), d))
    return res


def sweep_corollaries(n_max: int, max_edges: int | None = None) -> tuple[SweepResult, SweepResult, SweepResult]:
    """The three path inequalities over all bindings (s, a, b[, t]).

    Model O is uniform, so every probability is a count over 2^m and all
    comparisons are done on exact integer cross-products.
    """
    eq1, eq2, eq3 = SweepResult("two-paths"), SweepResult("two-paths-conditioned"), SweepResult("in-out-negative-conditioned")
    for g in graphs_up_to(n_max, max_edges):
        t = full_table(g, O)
        R = _reach_matrix(t).astype(np.int64)
        total = t.size
        n = g.n
        for s in range(n):
            A = R[s]  # A[a]: s -> a
            ca = A.sum(axis=1)
            cab = A @ A.T
            for a in range(n):
                for b in range(n):
                    eq1.record(int(ca[a]) * int(ca[b]) <= int(cab[a, b]) * total, (g.vertices, s, a, b))
            for tt in range(n):
                if tt == s:
                    continue
                cond = 1 - R[s, tt]
                cc = int(cond.sum())
                if cc == 0:
                    eq2.skipped += n * n
                    eq3.skipped += n * n
                    continue
                Ac = A * cond
                cac = Ac.sum(axis=1)
                cabc = Ac @ Ac.T
                At = R[:, tt, :] * cond  # a -> t
                catc = At.sum(axis=1)
                catb = At @ Ac.T
                for a in range(n):
                    for b in range(n):
                        eq2.record(int(cac[a]) * int(cac[b]) <= int(cabc[a, b]) * cc, (g.vertices, g.edges, s, a, b, tt))
                        eq3.record(int(catc[a]) * int(cac[b]) >= int(catb[a, b]) * cc, (g.vertices, g.edges, s, a, b, tt))
    return eq1, eq2, eq3


def sweep_oriented_harris_vdbhk(n_max: int, max_set: int = 2) -> tuple[SweepResult, SweepResult]:
    """Single-generator families A, B rooted at s; all X, Y of size <= max_set."""
    harris, vdbhk = SweepResult("oriented-harris"), SweepResult("oriented-vdbhk")
    for g in graphs_up_to(n_max):
        t = full_table(g, O)
        total = t.size
        n = g.n
        for s in range(n):
            others = [v for v in range(n) if v != s]
            gens = [(1 << s) | sum(1 << v for v in c) for k in range(n) for c in combinations(others, k)]
            cl = t.out_cluster(s)
            F = np.array([(cl & np.uint64(x)) == np.uint64(x) for x in gens], dtype=np.int64)
            small = [sum(1 << v for v in c) for k in range(max_set + 1) for c in combinations(others, k)]
            every = [sum(1 << v for v in c) for k in range(len(others) + 1) for c in combinations(others, k)]
            avoid = {x: ((cl & np.uint64(x)) == 0).astype(np.int64) for x in every}
            p_avoid = {x: int(avoid[x].sum()) for x in every}
            p_fa = {x: F @ avoid[x] for x in small}
            p_ffz: dict[int, np.ndarray] = {}
            for i in range(len(gens)):
                for j in range(len(gens)):
                    harris.record(
                        int(F[i].sum()) * int(F[j].sum()) <= int(F[i] @ F[j]) * total,
                        (g.vertices, g.edges, s, gens[i], gens[j]),
                    )
            for x in small:
                for y in small:
                    z = x & y
                    if z not in p_ffz:
                        p_ffz[z] = (F * avoid[z]) @ F.T
                    lhs = p_fa[x][:, None] * p_fa[y][None, :]
                    rhs = p_ffz[z] * p_avoid[x | y]
                    bad = np.argwhere(lhs > rhs)
                    vdbhk.checked += lhs.size
                    vdbhk.held += lhs.size - len(bad)
                    for i, j in bad.tolist():
                        vdbhk.violations.append((g.vertices, g.edges, s, gens[i], gens[j], x, y))
    return harris, vdbhk


def sweep_harris_classical(n_max: int, ps: Iterable) -> SweepResult:
    """All single-generator edge families (any edge subset, singletons
    included) on every labeled graph with at most ``n_max`` vertices."""
    res = SweepResult("harris")
    for p in ps:
        p = Fraction(p)
        model = ModelSpec.edge_percolation(p)
        for g in graphs_up_to(n_max, connected=False):
            t = full_table(g, model)
            cls, weights = t.weight_classes
            den = math.lcm(*(w.denominator for w in weights))
            nums = [int(w * den) for w in weights]
            onehot = np.zeros((t.size, len(weights)), dtype=np.int64)
            onehot[np.arange(t.size), cls] = 1
            present = (t.codes == 1).astype(np.int64)
            gens = list(range(1 << g.m))
            ind = np.ones((len(gens), t.size), dtype=np.int64)
            for k, gen in enumerate(gens):
                for e in members(gen):
                    ind[k] *= present[e]
            single = [sum(int(c) * w for c, w in zip(row, nums)) for row in (ind @ onehot).tolist()]
            joint = np.zeros((len(gens), len(gens)), dtype=object)
            for c, w in enumerate(nums):
                joint += (ind * onehot[:, c]) @ ind.T * w
            for i in range(len(gens)):
                for j in range(len(gens)):
                    res.record(single[i] * single[j] <= int(joint[i, j]) * den, (g.vertices, g.edges, str(p), gens[i], gens[j]))
    return res


def sweep_bunkbed(n_max: int, ps: Iterable) -> SweepResult:
    """Bunkbed inequality for every (u, v) on every connected graph."""
    res = SweepResult("bunkbed")
    for p in ps:
        p = Fraction(p)
        for g in graphs_up_to(n_max):
            bb = bunkbed_product(g)
            t = full_table(bb, ModelSpec.edge_percolation(p))
            n = g.n
            for u in range(n):
                for v in range(n):
                    lhs = t.probability(t.reaches(u, v))
                    rhs = t.probability(t.reaches(u, v + n))
                    rep = InequalityReport(
                        "bunkbed", _instance(g, u=g.vertices[u], v=g.vertices[v], p=p),
                        lhs, rhs, ">=", conjecture=True,
                    )
                    res.record(rep.holds, rep)
    return res
