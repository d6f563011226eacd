import json
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from fdeletion.exact import solve_exact
from fdeletion.graph import complete_graph, disjoint_union, path_graph
from fdeletion.harness.corpus import GENERATORS, ConfigError, CorpusSpec, generate, generate_one
from fdeletion.harness.experiments import (
    CheckResult,
    ExperimentConfig,
    check_lca_closure,
    corpus_ratio,
    exact_expected_weight,
    fpt_success_probability,
    hoeffding,
    reachable_residuals,
    run_experiments,
)
from fdeletion.harness.oracles import (
    all_modulators,
    brute_opt,
    brute_opt_eta,
    expectation_audit,
    hitting_sets,
)
from fdeletion.minors import preset
from fdeletion.separations import PreconditionError
from fdeletion.solvers import approx_deletion, fpt_k_optimal
from fdeletion.treewidth import CapExceeded, is_tw_at_most, treewidth

K3F = preset("k3")


def fs(*xs):
    return frozenset(xs)


def test_all_modulators_examples():
    assert all_modulators(path_graph(4), 1) == (frozenset(),)
    assert set(all_modulators(complete_graph(3), 1)) == {fs(1), fs(2), fs(3)}
    k4 = complete_graph(4)
    assert set(all_modulators(k4, 1)) == {fs(u, v) for u, v in k4.edges}
    with pytest.raises(CapExceeded):
        all_modulators(path_graph(13), 1)


@given(graphs(max_n=8, p=0.5), st.sampled_from([1, 2]))
def test_all_modulators_against_treewidth_dp(g, eta):
    mods = all_modulators(g, eta)
    for x in mods:
        assert treewidth(g.delete(x)) <= eta
        for v in x:
            assert treewidth(g.delete(x - {v})) > eta


def test_hitting_sets_and_opt():
    hs = hitting_sets(complete_graph(3), K3F)
    assert fs() not in hs and fs(1) in hs and len(hs) == 7
    assert brute_opt(complete_graph(3), K3F) == 1
    assert brute_opt(disjoint_union(complete_graph(3), complete_graph(3)), K3F, 1) == math.inf
    assert brute_opt_eta(complete_graph(5), 2) == 2


def test_expectation_audit_examples():
    assert expectation_audit(complete_graph(3), 1, K3F) == (1, 1, 1)
    g = complete_graph(3).with_weights({1: 1, 2: 1, 3: 100})
    e_cost, e_drop, ratio = expectation_audit(g, 1)
    assert ratio == e_cost / e_drop and e_drop > 0
    with pytest.raises(PreconditionError):
        expectation_audit(path_graph(4), 1)
    with pytest.raises(PreconditionError):
        expectation_audit(complete_graph(3), 2, K3F)


@given(graphs(min_n=3, max_n=8, p=0.5, max_weight=3))
def test_audit_drop_is_positive(g):
    if is_tw_at_most(g, 1):
        return
    e_cost, e_drop, ratio = expectation_audit(g, 1)
    assert e_drop > 0 and ratio >= 1


def test_reachable_residuals_of_two_triangles():
    res = reachable_residuals(disjoint_union(complete_graph(3), complete_graph(3)), 1)
    assert res == [frozenset(), fs(1), fs(4)]


def test_corpus_ratio_of_triangle():
    assert corpus_ratio([complete_graph(3)], 1) == (Fraction(1), [], 0)


def test_exact_expected_weight_matches_monte_carlo():
    g = disjoint_union(complete_graph(4), complete_graph(3)).with_weights({1: 2, 5: 3})
    exp = exact_expected_weight(g, K3F)
    runs = [approx_deletion(g, K3F, s).weight for s in range(2000)]
    assert abs(sum(runs) / len(runs) - float(exp)) < hoeffding(g.weight_of(g.vertices), 2000, two_sided=True)
    assert exp >= solve_exact(g, K3F)[1]


def test_hoeffding():
    assert hoeffding(1, 0) == math.inf
    assert hoeffding(2, 100) == pytest.approx(2 * math.sqrt(math.log(100) / 200))
    assert hoeffding(1, 100, two_sided=True) > hoeffding(1, 100)


def test_lca_check():
    r = check_lca_closure(count=100, seed=1)
    assert r.passed and r.instances == 100


def test_check_result_line():
    r = CheckResult("x", instances=3, measured={"c": Fraction(3, 2)})
    assert r.line() == "PASS x (3 instances, c=3/2)"
    r.fail("boom")
    assert r.line().startswith("FAIL") and r.failures == ["boom"]


# -- corpus -------------------------------------------------------------------


@pytest.mark.parametrize("gen", GENERATORS)
def test_generators_are_deterministic(gen):
    spec = CorpusSpec(gen, (5, 9), {}, (1, 3), seed=4, count=6)
    first = generate(spec)
    assert first == generate(spec)
    assert all(5 <= g.n <= 9 for g in first)
    assert all(1 <= w <= 3 for g in first for w in g.weights.values())
    assert generate_one(spec, 3) == first[3]
    assert all(g.vertices == tuple(range(1, g.n + 1)) for g in first)


def test_generator_params():
    g = generate_one(CorpusSpec("gnp", (8, 8), {"p": 1.0}), 0)
    assert g.m == 28
    g = generate_one(CorpusSpec("trees_plus_edges", (9, 9), {"extra": 0}), 0)
    assert g.m == 8
    g = generate_one(CorpusSpec("disjoint_cliques", (7, 7), {"sizes": (3, 3)}), 0)
    assert g.m == 6


@pytest.mark.parametrize(
    "kw",
    [{"generator": "nope"}, {"generator": "gnp", "n_range": (5, 2)}, {"generator": "gnp", "weights": (0, 1)},
     {"generator": "gnp", "count": -1}],
)
def test_corpus_spec_errors(kw):
    with pytest.raises(ConfigError):
        CorpusSpec(**kw)


# -- experiment runner ----------------------------------------------------------


def test_empty_corpus_passes_vacuously():
    rep = run_experiments(CorpusSpec("gnp", count=0), ExperimentConfig())
    assert rep.passed
    assert all(c.instances == 0 for c in rep.checks)


def test_unknown_check():
    with pytest.raises(ConfigError):
        run_experiments(CorpusSpec("gnp", count=1), ExperimentConfig(checks=("bogus",)))


def test_report_is_reproducible_and_populated():
    spec = CorpusSpec("gnp", (6, 9), {"p": 0.4}, seed=2, count=6)
    cfg = ExperimentConfig(checks=("hitting_family", "protrusion_bound", "sampling_audit", "approx_quality"), mc_runs=20)
    a = run_experiments(spec, cfg)
    b = run_experiments(spec, cfg)
    assert a.to_json() == b.to_json()
    obj = json.loads(a.to_json())
    assert obj["schema"] == 1 and obj["passed"]
    assert "sampling_audit.c_corpus" in obj["constants"]
    assert a.to_csv().splitlines()[0] == "check,passed,instances,measured"


def test_fpt_check_on_tiny_corpus():
    spec = CorpusSpec("disjoint_cliques", (6, 7), {"sizes": (3, 3)}, seed=1, count=3)
    rep = run_experiments(spec, ExperimentConfig(checks=("fpt",), fpt_k=2, fpt_seeds=3))
    assert rep.passed, rep.checks[0].failures


def test_fpt_success_probability_examples():
    k3 = complete_graph(3)
    assert fpt_success_probability(k3, K3F, 1) == (1, 1)
    two = disjoint_union(complete_graph(3), complete_graph(3))
    assert fpt_success_probability(two, K3F, 1) == (0, 0)


def test_fpt_success_probability_matches_sampling():
    g = generate_one(CorpusSpec("gnp", (6, 8), {"p": 0.45}, (1, 3), seed=11), 0)
    p, big = fpt_success_probability(g, K3F, 1, repetitions=4)
    assert big == 1 - (1 - p) ** 4
    opt = brute_opt(g, K3F, 1)
    runs = 400
    hits = sum(fpt_k_optimal(g, K3F, 1, s, 1).weight == opt for s in range(runs))
    assert abs(hits / runs - float(p)) <= hoeffding(1, runs, 0.001, two_sided=True)
