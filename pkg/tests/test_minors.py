import json

import pytest
from hypothesis import given

from brute import has_minor_by_branch_sets
from conftest import graphs
from fdeletion.graph import (
    WeightedGraph,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    grid_graph,
    path_graph,
    to_json_obj,
)
from fdeletion.minors import (
    K3,
    K4,
    K5,
    K23,
    K33,
    FamilyError,
    MinorFamilySpec,
    has_minor,
    is_F_minor_free,
    is_hitting_set,
    load_family,
    preset,
    treewidth_obstructions,
)
from fdeletion.treewidth import CapExceeded, treewidth

PATTERNS = [K3, K4, K23, path_graph(3), WeightedGraph([1, 2, 3, 4], [(1, 2), (3, 4)]), cycle_graph(4)]


def test_has_minor_examples():
    assert has_minor(K3, K3)
    assert not has_minor(path_graph(4), K3)
    # K4 minus edge 1-2, with edge 3-4 subdivided by vertex 5
    g = WeightedGraph(range(1, 6), [(1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (5, 4)])
    assert has_minor(g, K3)
    assert has_minor_by_branch_sets(g, K3)


def test_pattern_cap():
    with pytest.raises(CapExceeded):
        has_minor(complete_graph(8), complete_graph(7))


def test_kuratowski_patterns():
    assert has_minor(K5, K5) and not has_minor(K5, K33)
    assert has_minor(complete_graph(6), K33)
    petersen = WeightedGraph(
        range(10),
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
         (5, 7), (7, 9), (9, 6), (6, 8), (8, 5)],
    )
    assert has_minor(petersen, K5) and has_minor(petersen, K33)
    assert not has_minor(grid_graph(3, 3), K5)


@given(graphs(max_n=7, p=0.45))
def test_has_minor_matches_branch_set_oracle(g):
    for h in PATTERNS:
        assert has_minor(g, h) == has_minor_by_branch_sets(g, h), h


@given(graphs(max_n=11, p=0.4))
def test_treewidth_obstructions(g):
    w = treewidth(g)
    assert has_minor(g, K3) == (w >= 2)
    assert has_minor(g, K4) == (w >= 3)


@given(graphs(max_n=9, p=0.45))
def test_outerplanar_fast_path_matches_minor_search(g):
    fam = preset("outerplanar")
    assert is_F_minor_free(g, fam) == (not has_minor(g, K4) and not has_minor(g, K23))


def test_is_F_minor_free_examples():
    k3 = preset("k3")
    assert is_F_minor_free(path_graph(5), k3)
    assert not is_F_minor_free(K3, k3)
    # the 2x3 grid is a 6-cycle with a chord, hence outerplanar
    assert is_F_minor_free(grid_graph(2, 3), preset("outerplanar"))
    assert not is_F_minor_free(grid_graph(3, 3), preset("outerplanar"))
    assert has_minor(grid_graph(3, 3), K23)


def test_is_hitting_set():
    assert is_hitting_set(K3, preset("k3"), {1})
    assert not is_hitting_set(complete_graph(4), preset("k3"), {1})


def test_presets():
    assert preset("k3").eta == 1 and preset("k3").h == 3
    assert preset("k4").eta == 2
    op = preset("outerplanar")
    assert op.eta == 2 and op.h == 6 and op.min_degree == 2 and op.connected
    with pytest.raises(FamilyError, match="no planar graph"):
        preset("k5k33")
    with pytest.raises(FamilyError, match="unknown"):
        preset("nope")


def test_family_validation():
    with pytest.raises(FamilyError, match="no planar graph"):
        MinorFamilySpec((K5, K33), 3)
    with pytest.raises(FamilyError):
        MinorFamilySpec((), 1)
    with pytest.raises(FamilyError):
        MinorFamilySpec((K3,), 0)
    with pytest.raises(FamilyError, match="cap"):
        MinorFamilySpec((complete_graph(7),), 5)


def test_treewidth_obstructions_presets():
    assert treewidth_obstructions(1).patterns == (K3,)
    assert treewidth_obstructions(2).patterns == (K4,)
    with pytest.raises(FamilyError):
        treewidth_obstructions(3)


def test_load_family():
    text = json.dumps({"eta": 2, "patterns": [to_json_obj(K4), to_json_obj(complete_bipartite(2, 3))]})
    fam = load_family(text)
    assert fam.eta == 2 and len(fam.patterns) == 2
    with pytest.raises(FamilyError):
        load_family("{}")
    with pytest.raises(FamilyError):
        load_family("not json")
    with pytest.raises(FamilyError):
        load_family(json.dumps({"eta": 1, "patterns": [{"vertices": [1], "edges": [[1, 1]]}]}))


@given(graphs(min_n=8, max_n=8, p=0.3))
def test_eight_vertex_graphs_small_patterns(g):
    for h in (K3, path_graph(3)):
        assert has_minor(g, h) == has_minor_by_branch_sets(g, h)
