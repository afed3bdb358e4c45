import pytest
from hypothesis import given, settings

from disgtoric import load_fixture
from disgtoric.network import (
    EGraph,
    GraphError,
    SpeciesMismatchError,
    complete_graph,
    is_subgraph,
    is_weakly_reversible,
    linkage_classes,
    stoichiometric_dim,
    strongly_connected_components,
    subgraph_from_edges,
)
from randgraphs import graphs


def reach(nodes, succ):
    closure = {v: {v} for v in nodes}
    changed = True
    while changed:
        changed = False
        for v in nodes:
            for w in list(closure[v]):
                for u in succ.get(w, ()):
                    if u not in closure[v]:
                        closure[v].add(u)
                        changed = True
    return closure


def test_canonical_vertex_order():
    g = load_fixture("brusselator")
    assert g.vertices == ((1, 0), (0, 1), (1, 2), (0, 3))
    c = load_fixture("circadian")
    assert c.vertices == ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0))


def test_construction_order_does_not_matter():
    a = EGraph.from_reactions(("X",), [((0,), (1,)), ((1,), (2,))])
    b = EGraph.from_reactions(("X",), [((1,), (2,)), ((0,), (1,))])
    assert a == b and hash(a) == hash(b)


def test_invalid_graphs():
    with pytest.raises(GraphError):
        EGraph(("X",), [(0,), (1,)], [(0, 0)])
    with pytest.raises(GraphError):
        EGraph(("X",), [(0,), (1,)], [(0, 1), (0, 1)])
    with pytest.raises(GraphError):
        EGraph(("X",), [(-1,)])
    with pytest.raises(GraphError):
        EGraph(("X", "X"), [(0, 0)])


def test_immutable():
    g = load_fixture("thomas")
    with pytest.raises(AttributeError):
        g.edges = ()


def test_fixture_linkage_and_reversibility():
    assert linkage_classes(load_fixture("brusselator")).count == 1
    assert linkage_classes(load_fixture("thomas")).count == 1
    c = load_fixture("circadian")
    assert linkage_classes(c).count == 1  # C -> 0 joins the two blocks
    assert not is_weakly_reversible(c)  # nothing leads back to C from 0
    assert is_weakly_reversible(load_fixture("circadian_gprime"))
    assert linkage_classes(load_fixture("circadian_gprime")).count == 1


def test_stoichiometric_dims():
    assert stoichiometric_dim(load_fixture("brusselator_gprime")) == 2
    assert stoichiometric_dim(load_fixture("circadian_gprime")) == 3


def test_complete_graph_modes():
    g = load_fixture("circadian")
    assert len(complete_graph(g).edges) == 20
    h = EGraph.from_reactions(("X",), [((0,), (1,))])
    assert len(complete_graph(h).vertices) == 1
    assert len(complete_graph(h, "all").edges) == 2
    with pytest.raises(ValueError):
        complete_graph(h, "every")


def test_subgraph_relation():
    sq = load_fixture("square")
    full = load_fixture("square_complete")
    assert is_subgraph(sq, full)
    assert not is_subgraph(full, sq)
    other = EGraph.from_reactions(("P", "Q"), [((0, 0), (1, 0))])
    with pytest.raises(SpeciesMismatchError):
        is_subgraph(other, sq)


def test_reorder_species_round_trip():
    g = load_fixture("circadian")
    h = g.reorder_species(("C", "T", "P"))
    assert h.reorder_species(g.species) == g
    with pytest.raises(SpeciesMismatchError):
        g.reorder_species(("P", "T"))


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_scc_agrees_with_mutual_reachability(g):
    nodes = list(range(len(g.vertices)))
    succ = {}
    for s, t in g.edges:
        succ.setdefault(s, []).append(t)
    closure = reach(nodes, succ)
    comps = strongly_connected_components(nodes, succ)
    assert sorted(v for c in comps for v in c) == nodes
    for c in comps:
        for a in c:
            for b in nodes:
                assert (b in c) == (b in closure[a] and a in closure[b])
    wr = all(s in closure[t] for s, t in g.edges)
    assert is_weakly_reversible(g) == wr


@settings(max_examples=100, deadline=None)
@given(graphs())
def test_subgraph_from_all_edges_is_identity(g):
    assert subgraph_from_edges(g, range(len(g.edges))) == g
