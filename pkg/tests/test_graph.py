import pytest
from hypothesis import given, strategies as st

from orientcorr.graph import (
    Graph,
    GraphError,
    bunkbed_product,
    delete_vertices,
    edges_between,
    enumerate_labeled_graphs,
    format_edge_list,
    members,
    parse_edge_list,
    vset,
)


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    flips = draw(st.lists(st.booleans(), min_size=len(chosen), max_size=len(chosen)))
    edges = tuple((j, i) if f else (i, j) for (i, j), f in zip(chosen, flips))
    return Graph(tuple(f"n{i}" for i in range(n)), edges)


def test_parse_path():
    g = parse_edge_list("a b\nb c")
    assert g.vertices == ("a", "b", "c")
    assert g.edges == ((0, 1), (1, 2))


def test_parse_header_isolated_vertex():
    g = parse_edge_list("vertices: u\n")
    assert g.vertices == ("u",) and g.m == 0


def test_parse_header_order_and_comments():
    g = parse_edge_list("# demo\nvertices: z y\nx y  # trailing\n\n")
    assert g.vertices == ("z", "y", "x")
    assert g.edges == ((2, 1),)


@pytest.mark.parametrize(
    "text",
    ["a b\na b", "a b\nb a", "a a", "a b c", "a", "a b\nvertices: c"],
)
def test_parse_errors(text):
    with pytest.raises(GraphError):
        parse_edge_list(text)


@given(graphs())
def test_format_parse_roundtrip(g):
    assert parse_edge_list(format_edge_list(g)) == g


def test_bunkbed_single_edge_is_four_cycle():
    g = parse_edge_list("x y")
    b = bunkbed_product(g)
    assert b.vertices == ("x0", "y0", "x1", "y1")
    assert sorted(tuple(sorted(e)) for e in b.edges) == [(0, 1), (0, 2), (1, 3), (2, 3)]


def test_bunkbed_single_vertex():
    b = bunkbed_product(parse_edge_list("vertices: x"))
    assert b.n == 2 and b.edges == ((0, 1),)


def test_bunkbed_triangle_is_prism():
    b = bunkbed_product(parse_edge_list("a b\nb c\na c"))
    assert b.m == 9
    assert all(b.degree(v) == 3 for v in range(b.n))


def test_bunkbed_capacity():
    g = Graph(tuple(f"v{i}" for i in range(33)), ())
    with pytest.raises(GraphError):
        bunkbed_product(g)


@given(graphs())
def test_bunkbed_counts(g):
    b = bunkbed_product(g)
    assert (b.n, b.m) == (2 * g.n, 2 * g.m + g.n)


def test_delete_vertices_examples(triangle):
    assert delete_vertices(triangle, vset([0])).m == 1
    assert delete_vertices(triangle, 0) == triangle
    assert delete_vertices(triangle, triangle.all_vertices) == Graph((), ())


@given(graphs(), st.integers(0, 127), st.integers(0, 127))
def test_delete_vertices_composes(g, a, b):
    a &= g.all_vertices
    b &= g.all_vertices
    once = delete_vertices(g, a | b)
    first = delete_vertices(g, a)
    rest = first.vertex_set(g.vertices[i] for i in members(b & ~a))
    assert delete_vertices(first, rest) == once


def test_edges_between_examples(triangle, path3):
    assert edges_between(triangle, triangle.vertex_set(["a", "b"]), "s") == 2
    assert edges_between(path3, path3.vertex_set(["u"]), "w") == 0
    with pytest.raises(GraphError):
        edges_between(path3, path3.vertex_set(["u"]), "u")


@given(graphs(), st.data())
def test_edges_between_partition_degree(g, data):
    v = data.draw(st.integers(0, g.n - 1))
    s = data.draw(st.integers(0, g.all_vertices)) & ~(1 << v)
    rest = g.all_vertices & ~s & ~(1 << v)
    assert edges_between(g, s, v) + edges_between(g, rest, v) == g.degree(v)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 8), (4, 64)])
def test_enumerate_counts(n, count):
    gs = list(enumerate_labeled_graphs(n))
    assert len(gs) == count
    assert len({g.edges for g in gs}) == count
    assert gs[0].m == 0 and gs[-1].m == n * (n - 1) // 2


@pytest.mark.parametrize("n", [0, 7])
def test_enumerate_range(n):
    with pytest.raises(GraphError):
        list(enumerate_labeled_graphs(n))


def test_connectivity(path3):
    assert path3.is_connected()
    assert not parse_edge_list("vertices: a b").is_connected()
