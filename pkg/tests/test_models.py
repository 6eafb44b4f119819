from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from orientcorr.events import TRUE, Reach
from orientcorr.graph import parse_edge_list
from orientcorr.models import (
    CapExceeded,
    EdgeState,
    ModelSpec,
    StateTable,
    WorldState,
    dp_split_parameters,
    enumerate_states,
    event_probability,
    full_table,
    in_cluster,
    out_cluster,
    parse_model,
)
from test_graph import graphs

F = Fraction
E = EdgeState
EDGE = parse_edge_list("u v")

probs = st.sampled_from([F(0), F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(1)])


@st.composite
def models(draw):
    kind = draw(st.sampled_from(["e", "o", "d", "mixed"]))
    if kind == "o":
        return ModelSpec.random_orientation()
    if kind == "mixed":
        return ModelSpec.mixed(draw(probs), draw(probs))
    return ModelSpec(kind, p=draw(probs))


def _weights(model):
    return {s.edge_states[0]: s.weight for s in enumerate_states(EDGE, model)}


def test_single_edge_orientation():
    assert _weights(ModelSpec.random_orientation()) == {E.FORWARD: F(1, 2), E.BACKWARD: F(1, 2)}


def test_single_edge_percolation():
    p = F(1, 3)
    assert _weights(ModelSpec.edge_percolation(p)) == {E.PRESENT: p, E.ABSENT: 1 - p}


def test_single_edge_directed():
    p, q = F(1, 3), F(2, 3)
    assert _weights(ModelSpec.directed_percolation(p)) == {
        E.BOTH_ARCS: p * p, E.FORWARD: p * q, E.BACKWARD: p * q, E.ABSENT: q * q,
    }


def test_single_edge_mixed():
    pp, p1 = F(1, 3), F(1, 4)
    assert _weights(ModelSpec.mixed(pp, p1)) == {
        E.PRESENT: pp * p1, E.ABSENT: pp * (1 - p1), E.FORWARD: (1 - pp) / 2, E.BACKWARD: (1 - pp) / 2,
    }


def test_enumeration_order_is_index_order(triangle):
    states = list(enumerate_states(triangle, ModelSpec.directed_percolation(F(1, 2))))
    assert [s.index for s in states] == list(range(64))
    # digit e of the base-4 index is the code of edge e
    assert states[1].edge_states == (E.FORWARD, E.ABSENT, E.ABSENT)
    assert states[4].edge_states == (E.ABSENT, E.FORWARD, E.ABSENT)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=4), models())
def test_weights_sum_to_one(g, model):
    if model.num_states(g.m) > 4096:
        return
    assert sum(s.weight for s in enumerate_states(g, model)) == 1
    assert event_probability(g, model, TRUE) == 1


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=5), models())
def test_table_matches_per_state_bfs(g, model):
    if model.num_states(g.m) > 1024:
        return
    t = full_table(g, model)
    for k, st_ in enumerate(enumerate_states(g, model)):
        assert t.world_state(k) == st_
        for v in range(g.n):
            assert int(t.reach[v][k]) == out_cluster(g, st_, v)
            assert int(t.in_cluster(v)[k]) == in_cluster(g, st_, v)


def test_out_cluster_examples(path3):
    st_ = WorldState((E.FORWARD, E.BACKWARD), F(1, 4))  # u->v, w->v
    assert out_cluster(path3, st_, "u") == path3.vertex_set("uv")
    assert in_cluster(path3, st_, "v") == path3.vertex_set("uvw")
    absent = WorldState((E.ABSENT, E.ABSENT), F(1))
    assert out_cluster(path3, absent, "u") == path3.vertex_set("u")
    both = WorldState((E.BOTH_ARCS, E.ABSENT), F(1))
    assert out_cluster(path3, both, "u") >> 1 & 1 and out_cluster(path3, both, "v") & 1


def test_in_cluster_single_arc():
    st_ = WorldState((E.FORWARD,), F(1, 2))
    assert in_cluster(EDGE, st_, "u") == EDGE.vertex_set("u")


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=5), st.sampled_from([ModelSpec.random_orientation(), ModelSpec.directed_percolation(F(1, 3)), ModelSpec.mixed(F(1, 2), F(1, 2))]))
def test_reversal_duality(g, model):
    if model.num_states(g.m) > 1024:
        return
    for st_ in enumerate_states(g, model):
        rev = st_.reversed()
        for v in range(g.n):
            assert in_cluster(g, st_, v) == out_cluster(g, rev, v)
            for w in range(g.n):
                assert (out_cluster(g, st_, v) >> w & 1) == (in_cluster(g, st_, w) >> v & 1)


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=5), st.data())
def test_adding_arcs_never_shrinks_clusters(g, data):
    if g.m == 0:
        return
    model = ModelSpec.directed_percolation(F(1, 2))
    codes = data.draw(st.lists(st.integers(0, 3), min_size=g.m, max_size=g.m))
    extra = data.draw(st.lists(st.integers(0, 3), min_size=g.m, max_size=g.m))
    local = [s for s, _ in model.local_states]
    small = WorldState(tuple(local[c] for c in codes), F(1))
    big = WorldState(tuple(local[c | x] for c, x in zip(codes, extra)), F(1))
    for v in range(g.n):
        c = out_cluster(g, small, v)
        assert c >> v & 1
        assert out_cluster(g, big, v) & c == c


def test_event_probability_examples(triangle):
    O = ModelSpec.random_orientation()
    assert event_probability(triangle, O, Reach(0, 1 << 1)) == F(5, 8)
    assert event_probability(EDGE, O, Reach(0, 1 << 1)) == F(1, 2)
    assert event_probability(triangle, O, TRUE) == 1


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=4), st.data())
def test_event_probability_matches_oracle(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    a = data.draw(st.integers(0, g.n - 1))
    p = data.draw(probs)
    want_o = oracle.prob(g.n, oracle.orientations(g.n, g.edges), lambda r: a in r(s))
    want_e = oracle.prob(g.n, oracle.percolation(g.n, g.edges, p), lambda r: a in r(s))
    assert event_probability(g, ModelSpec.random_orientation(), Reach(s, 1 << a)) == want_o
    assert event_probability(g, ModelSpec.edge_percolation(p), Reach(s, 1 << a)) == want_e
    if g.m <= 4:
        want_d = oracle.prob(g.n, oracle.directed(g.n, g.edges, p), lambda r: a in r(s))
        assert event_probability(g, ModelSpec.directed_percolation(p), Reach(s, 1 << a)) == want_d


def test_chunked_and_threaded_fold_agree():
    g = parse_edge_list("\n".join(f"a{i} a{i+1}" for i in range(17)) + "\na0 a17")
    O = ModelSpec.random_orientation()
    pred = Reach(0, 1 << 9)
    one = event_probability(g, O, pred)
    assert one == event_probability(g, O, pred, threads=3)
    # on a cycle of 18, s reaches the far vertex iff one of the two arcs-paths is directed
    assert one == 2 * F(1, 2**9) - F(1, 2**18)


def test_cap(triangle):
    with pytest.raises(CapExceeded):
        list(enumerate_states(triangle, ModelSpec.random_orientation(), max_states=4))
    with pytest.raises(CapExceeded):
        event_probability(triangle, ModelSpec.directed_percolation(F(1, 2)), TRUE, max_states=63)
    big = parse_edge_list("\n".join(f"a{i} a{i+1}" for i in range(13)))
    with pytest.raises(CapExceeded):
        event_probability(big, ModelSpec.directed_percolation(F(1, 2)), TRUE)


@pytest.mark.parametrize("p,expected", [(F(1, 2), (F(1, 2), F(1, 2))), (F(1), (F(1), F(1))), (F(0), (F(1), F(0))), (F(1, 3), (F(5, 9), F(1, 5)))])
def test_dp_split(p, expected):
    assert dp_split_parameters(p) == expected


def test_dp_split_range():
    with pytest.raises(ValueError):
        dp_split_parameters(F(3, 2))


@given(probs)
def test_mixed_split_equals_directed_per_edge(p):
    mixed = _weights(ModelSpec.mixed(*dp_split_parameters(p)))
    d = _weights(ModelSpec.directed_percolation(p))
    ident = {E.PRESENT: E.BOTH_ARCS, E.ABSENT: E.ABSENT, E.FORWARD: E.FORWARD, E.BACKWARD: E.BACKWARD}
    assert {ident[k]: v for k, v in mixed.items()} == d


@given(probs)
def test_mixed_full_split_marginalizes_to_percolation(p):
    mixed = _weights(ModelSpec.mixed(1, p))
    assert mixed[E.FORWARD] == mixed[E.BACKWARD] == 0
    assert {E.PRESENT: mixed[E.PRESENT], E.ABSENT: mixed[E.ABSENT]} == _weights(ModelSpec.edge_percolation(p))


@pytest.mark.parametrize("text", ["e:p=1/2", "o", "d:p=1/3", "mixed:pp=1/3,p1=1/2"])
def test_model_strings_roundtrip(text):
    assert str(parse_model(text)) == text


@pytest.mark.parametrize("text", ["x", "e", "e:p=2", "o:p=1/2", "d:q=1/2", "mixed:pp=1/2", "e:p=0.5"])
def test_model_string_errors(text):
    with pytest.raises(ValueError):
        parse_model(text)


def test_world_state_predicate(triangle):
    model = ModelSpec.random_orientation()
    st_ = WorldState((E.FORWARD, E.BACKWARD, E.BACKWARD), F(1, 8))  # s->a, b->s, b->a
    assert Reach(0, 1 << 1).holds(triangle, model, st_)
    assert not Reach(0, 1 << 2).holds(triangle, model, st_)
    assert StateTable.from_states(triangle, model, [st_]).size == 1
