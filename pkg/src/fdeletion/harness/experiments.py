"""Verification checks over corpora and the report that collects them.

Each ``check_*`` function runs one family of verifiers over a list of
instances and returns a :class:`CheckResult`. ``run_experiments`` wires them
to a generated corpus and writes a versioned JSON report.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..exact import solve_exact, solve_exact_k
from ..exhaustive import check_protrusion, exhaustive_family, exhaustive_family_sized
from ..graph import WeightedGraph, boundary, reach
from ..minors import MinorFamilySpec, is_F_minor_free, preset
from ..separations import (
    EDGE_PAIR,
    SEMI_SIMPLE,
    PreconditionError,
    build_hitting_family,
    enumerate_important_separators,
    enumerate_simple_separations,
    maximal_separations,
    protrusion_bound,
)
from ..solvers import (
    approx_deletion,
    approx_modulator,
    default_repetitions,
    fpt_k_optimal,
    sampling_distribution,
)
from ..treewidth import RootedTree, is_tw_at_most, lca_closure, treewidth
from .corpus import ConfigError, CorpusSpec, generate
from .oracles import (
    brute_important_separators,
    brute_opt,
    brute_opt_eta,
    expectation_audit,
    verify_exhaustive,
    verify_hitting_family,
)

SCHEMA = 1
CONFIDENCE = 0.99
MAX_FAILURES = 20


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    instances: int = 0
    measured: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.passed = False
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(msg)

    def line(self) -> str:
        extra = ", ".join(f"{k}={v}" for k, v in sorted(self.measured.items()))
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} ({self.instances} instances{', ' + extra if extra else ''})"

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "instances": self.instances,
            "measured": {k: _jsonable(v) for k, v in sorted(self.measured.items())},
            "failures": list(self.failures),
        }


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def hoeffding(value_range: float, n: int, delta: float = 1 - CONFIDENCE, two_sided: bool = False) -> float:
    """Half-width of the Hoeffding bound for the mean of ``n`` samples in a range."""
    if n <= 0:
        return math.inf
    return value_range * math.sqrt(math.log((2 if two_sided else 1) / delta) / (2 * n))


# -- separations ----------------------------------------------------------------


def check_hitting_family(graphs: list, eta: int) -> CheckResult:
    """Every minimal modulator meets the family, and the structural properties hold."""
    res = CheckResult("hitting_family")
    worst = Fraction(1)
    for idx, g in enumerate(graphs):
        if is_tw_at_most(g, eta):
            continue
        res.instances += 1
        fam = build_hitting_family(g, eta)
        for msg in structural_violations(g, eta, fam):
            res.fail(f"instance {idx}: {msg}")
        ok, frac = verify_hitting_family(g, eta, fam)
        worst = min(worst, frac)
        if not ok:
            res.fail(f"instance {idx}: some modulator misses every protrusion")
    res.measured["min_fraction"] = worst if res.instances else None
    return res


def structural_violations(g: WeightedGraph, eta: int, fam) -> list:
    """Violations of the five listed properties of the hitting family."""
    out = []
    simple = enumerate_simple_separations(g, eta)
    maximal = {(s.C, s.S) for s in maximal_separations(g, eta)}
    if not fam.separations:
        out.append("family is empty")
    seen_s = set()
    for sep in fam.separations:
        if sep.S in seen_s:
            out.append(f"separator {sorted(sep.S, key=repr)} appears twice")
        seen_s.add(sep.S)
        if sep.kind == EDGE_PAIR:
            u, v = tuple(sep.S)
            if sep.C or not g.has_edge(u, v):
                out.append("malformed edge-pair")
            if any(u in s.protrusion and v in s.protrusion for s in simple):
                out.append(f"edge-pair {u}-{v} is covered by a simple separation")
        elif sep.kind == SEMI_SIMPLE:
            if not sep.C or sep.C & sep.S:
                out.append("malformed semi-simple separation")
            for v in sep.C:
                r = reach(g, [v], sep.S)
                if (r, sep.S) not in maximal:
                    out.append(f"component of {v} is not a maximal simple separation")
                    break
        else:
            out.append(f"unexpected kind {sep.kind}")
    prots = fam.protrusions
    for u, v in g.edges:
        if not any(u in p and v in p for p in prots):
            out.append(f"edge {u}-{v} is not covered")
    return out


def check_protrusion_bound(graphs: list, eta: int) -> CheckResult:
    res = CheckResult("protrusion_bound")
    r = protrusion_bound(eta)
    members = 0
    for idx, g in enumerate(graphs):
        if is_tw_at_most(g, eta):
            continue
        res.instances += 1
        fam = build_hitting_family(g, eta)
        if len(fam) > len(enumerate_simple_separations(g, eta)) + g.m:
            res.fail(f"instance {idx}: family larger than simple separations plus edges")
        for p in fam.protrusions:
            members += 1
            tw = treewidth(g.induced(p))
            bd = len(boundary(g, p))
            if tw > r or bd > r:
                res.fail(f"instance {idx}: protrusion with tw={tw}, boundary={bd}")
    res.measured["members"] = members
    return res


def check_important_separators(graphs: list, ks=(1, 2, 3, 4), pairs_per_graph: int = 3, seed: int = 0) -> CheckResult:
    res = CheckResult("important_separators")
    rng = np.random.default_rng(seed)
    largest = 0
    for idx, g in enumerate(graphs):
        if g.n > 10 or g.n < 2:
            continue
        res.instances += 1
        verts = list(g.vertices)
        for _ in range(pairs_per_graph):
            v = verts[int(rng.integers(0, len(verts)))]
            others = [u for u in verts if u != v]
            size = int(rng.integers(1, min(3, len(others)) + 1))
            pick = rng.choice(len(others), size=size, replace=False)
            xs = frozenset(others[int(i)] for i in pick)
            for k in ks:
                got = enumerate_important_separators(g, v, xs, k)
                want = brute_important_separators(g, v, xs, k)
                largest = max(largest, len(got))
                if got != want:
                    res.fail(f"instance {idx}: v={v} X={sorted(xs)} k={k} mismatch")
                if len(got) > 4**k:
                    res.fail(f"instance {idx}: {len(got)} separators exceed 4^{k}")
    res.measured["max_count"] = largest
    return res


def random_tree(rng: np.random.Generator, n: int) -> RootedTree:
    parent = {0: None}
    for v in range(1, n):
        parent[v] = int(rng.integers(0, v))
    return RootedTree(parent)


def check_lca_closure(count: int = 1000, seed: int = 0, max_nodes: int = 40) -> CheckResult:
    res = CheckResult("lca_closure")
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(1, max_nodes + 1))
        tree = random_tree(rng, n)
        size = int(rng.integers(1, n + 1))
        s = [int(x) for x in rng.choice(n, size=size, replace=False)]
        res.instances += 1
        got = lca_closure(tree, s)
        want = frozenset(tree.lca(u, v) for u in s for v in s)
        if got != want:
            res.fail(f"pair {i}: closure differs from all-pairs LCAs")
        if not set(s) <= got or len(got) > 2 * len(s):
            res.fail(f"pair {i}: size bound violated ({len(got)} > 2*{len(s)})")
        # every component of T - L touches at most two nodes of L
        adj = {v: tree.neighbors(v) for v in tree.nodes}
        rest = [v for v in tree.nodes if v not in got]
        seen = set()
        for v in rest:
            if v in seen:
                continue
            comp, stack = {v}, [v]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in got and y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            touch = {y for x in comp for y in adj[x] if y in got}
            if len(touch) > 2:
                res.fail(f"pair {i}: component touches {len(touch)} closure nodes")
    return res


# -- exhaustive families ----------------------------------------------------------


def exhaustive_triples(graphs: list, fam_spec: MinorFamilySpec, per_graph: int = 3, seed: int = 0) -> list:
    """(graph, protrusion) pairs: hitting-family members first, then random connected sets."""
    rng = np.random.default_rng(seed)
    out = []
    for g in graphs:
        picks = []
        if not is_tw_at_most(g, fam_spec.eta):
            picks.extend(build_hitting_family(g, fam_spec.eta).protrusions)
        verts = list(g.vertices)
        for _ in range(2 * per_graph):
            start = verts[int(rng.integers(0, len(verts)))]
            size = int(rng.integers(1, g.n + 1))
            grown = [start]
            frontier = set(g.neighbors(start))
            while len(grown) < size and frontier:
                nxt = sorted(frontier, key=g.index)[int(rng.integers(0, len(frontier)))]
                grown.append(nxt)
                frontier = (frontier | g.neighbors(nxt)) - set(grown)
            picks.append(frozenset(grown))
        chosen = []
        for a in dict.fromkeys(picks):
            try:
                check_protrusion(g, a, fam_spec)
            except PreconditionError:
                continue
            chosen.append(a)
            if len(chosen) == per_graph:
                break
        out.extend((g, a) for a in chosen)
    return out


def check_exhaustive(triples: list, fam_spec: MinorFamilySpec, ells=(0, 1, 2)) -> CheckResult:
    res = CheckResult("exhaustive")
    largest = 0
    for idx, (g, a) in enumerate(triples):
        res.instances += 1
        fam = exhaustive_family(g, a, fam_spec)
        largest = max(largest, len(fam))
        if not verify_exhaustive(g, a, fam_spec, fam):
            res.fail(f"triple {idx}: family is not exhaustive")
        for ell in ells:
            sized = exhaustive_family_sized(g, a, fam_spec, ell)
            if any(len(y) > ell for y in sized.sets):
                res.fail(f"triple {idx}: candidate larger than ell={ell}")
            if not verify_exhaustive(g, a, fam_spec, sized, ell):
                res.fail(f"triple {idx}: sized family for ell={ell} is not exhaustive")
    res.measured["max_candidates"] = largest
    return res


# -- sampling audit and Monte Carlo ---------------------------------------------------


def reachable_residuals(g: WeightedGraph, eta: int) -> list:
    """Every deleted set the approximation loop can reach while treewidth exceeds ``eta``."""
    seen = {}
    stack = [frozenset()]
    while stack:
        xs = stack.pop()
        if xs in seen:
            continue
        h = g.delete(xs)
        if is_tw_at_most(h, eta):
            seen[xs] = False
            continue
        seen[xs] = True
        for _, y, _ in sampling_distribution(h, eta).pairs:
            stack.append(xs | y)
    return sorted((xs for xs, live in seen.items() if live), key=lambda x: (len(x), g.sort_key(x)))


def corpus_ratio(graphs: list, eta: int) -> tuple:
    """(max one-step ratio over all reachable residual graphs, identity failures, infinite count)."""
    best = Fraction(0)
    identity_failures = []
    infinite = 0
    for idx, g in enumerate(graphs):
        for xs in reachable_residuals(g, eta):
            h = g.delete(xs)
            e_cost, e_drop, ratio = expectation_audit(h, eta)
            dist = sampling_distribution(h, eta)
            if e_cost != Fraction(len(dist.pairs)) / dist.total:
                identity_failures.append(idx)
            if ratio == math.inf:
                infinite += 1
            else:
                best = max(best, ratio)
    return best, identity_failures, infinite


def check_audit(graphs: list, eta: int, frozen: Fraction | None = None) -> CheckResult:
    res = CheckResult("sampling_audit")
    res.instances = sum(1 for g in graphs if not is_tw_at_most(g, eta))
    best, identity_failures, infinite = corpus_ratio(graphs, eta)
    for idx in identity_failures:
        res.fail(f"instance {idx}: E[w(Y)] differs from |B|/W")
    if infinite:
        res.fail(f"{infinite} residual graphs have zero expected drop")
    if frozen is not None and best != frozen:
        res.fail(f"max ratio {best} differs from committed {frozen}")
    res.measured["c_corpus"] = best
    return res


def exact_expected_weight(g: WeightedGraph, fam: MinorFamilySpec, finish: bool = True) -> Fraction:
    """Exact expectation of the approximation output weight (modulator only if not ``finish``)."""
    eta = fam.eta

    @lru_cache(maxsize=None)
    def value(xs: frozenset) -> Fraction:
        h = g.delete(xs)
        if is_tw_at_most(h, eta):
            extra = solve_exact(h, fam)[1] if finish else 0
            return Fraction(g.weight_of(xs) + extra)
        dist = sampling_distribution(h, eta)
        return sum((m / dist.total) * value(xs | y) for _, y, m in dist.pairs)

    return value(frozenset())


def check_approx(
    graphs: list, fam: MinorFamilySpec, runs: int, constant: Fraction, committed: list | None = None, seed: int = 0
) -> CheckResult:
    """Validity, mean ratio against ``constant`` and per-instance Hoeffding bands."""
    res = CheckResult("approx_quality")
    worst_mean = 0.0
    total_runs = 0
    for idx, g in enumerate(graphs):
        opt = brute_opt(g, fam)
        res.instances += 1
        ws = []
        for r in range(runs):
            rep = approx_deletion(g, fam, int(np.random.SeedSequence([seed, idx, r]).generate_state(1)[0]))
            if not is_F_minor_free(g.delete(rep.solution), fam):
                res.fail(f"instance {idx} run {r}: output is not a hitting set")
            ws.append(rep.weight)
        total_runs += runs
        mean = sum(ws) / runs
        if opt > 0:
            ratio = mean / opt
            worst_mean = max(worst_mean, ratio)
            if ratio > constant:
                res.fail(f"instance {idx}: mean ratio {ratio:.4f} exceeds {float(constant):.4f}")
        if committed is not None:
            exp = committed[idx]
            band = hoeffding(g.weight_of(g.vertices), runs, two_sided=True)
            if abs(mean - float(exp)) > band:
                res.fail(f"instance {idx}: mean {mean:.4f} outside {float(exp):.4f} ± {band:.4f}")
    res.measured["runs"] = total_runs
    res.measured["max_mean_ratio"] = round(worst_mean, 6)
    return res


def check_supermartingale(graphs: list, fam: MinorFamilySpec, runs: int, c: Fraction, seed: int = 0) -> CheckResult:
    """Mean modulator weight stays below ``c * opt_eta`` plus the one-sided Hoeffding slack."""
    res = CheckResult("supermartingale")
    eta = fam.eta
    for idx, g in enumerate(graphs):
        if is_tw_at_most(g, eta):
            continue
        res.instances += 1
        bound = c * brute_opt_eta(g, eta)
        ws = [
            approx_modulator(g, eta, fam, int(np.random.SeedSequence([seed, idx, r]).generate_state(1)[0])).weight
            for r in range(runs)
        ]
        mean = sum(ws) / runs
        slack = hoeffding(g.weight_of(g.vertices), runs)
        if mean > float(bound) + slack:
            res.fail(f"instance {idx}: mean {mean:.4f} > {float(bound):.4f} + {slack:.4f}")
    return res


def fpt_success_probability(g: WeightedGraph, fam: MinorFamilySpec, k: int, repetitions: int | None = None) -> tuple:
    """Exact ``(p, P)``: one repetition returns a k-optimal set with probability ``p``,
    the best of ``repetitions`` does with probability ``P = 1 - (1 - p)^R``.
    """
    _, opt = solve_exact_k(g, fam, k)
    if opt == math.inf:
        return Fraction(0), Fraction(0)

    @lru_cache(maxsize=None)
    def hit(xs: frozenset, budget: int, target: int) -> Fraction:
        h = g.delete(xs)
        if budget == 0:
            return Fraction(int(target == 0 and is_F_minor_free(h, fam)))
        if is_tw_at_most(h, fam.eta):
            ys, w = solve_exact_k(h, fam, budget)
            return Fraction(int(ys is not None and w == target))
        prots = build_hitting_family(h, fam.eta).protrusions
        norm = 1 - Fraction(1, 2**budget)
        total = Fraction(0)
        for a in prots:
            for ell in range(1, budget + 1):
                cands = exhaustive_family_sized(h, a, fam, ell).nonempty()
                if not cands:
                    continue
                p_ell = Fraction(1, 2**ell) / norm / len(prots) / len(cands)
                for y, w in cands:
                    if w <= target:
                        total += p_ell * hit(xs | y, budget - ell, target - w)
        return total

    p = hit(frozenset(), k, opt)
    reps = default_repetitions(k) if repetitions is None else repetitions
    return p, 1 - (1 - p) ** reps


def check_fpt(instances: list, fam: MinorFamilySpec, seeds: int, threshold: float = 0.95, seed: int = 0) -> CheckResult:
    """``instances`` are (graph, k); feasible ones must hit the optimum in most seeds."""
    res = CheckResult("fpt")
    worst = 1.0
    for idx, (g, k) in enumerate(instances):
        res.instances += 1
        _, opt = solve_exact_k(g, fam, k)
        hits = 0
        for s in range(seeds):
            rep = fpt_k_optimal(g, fam, k, seed * 1_000_003 + s)
            if opt == math.inf:
                if rep.status != "failed":
                    res.fail(f"instance {idx}: infeasible but returned {sorted(rep.solution)}")
                continue
            if rep.status == "ok":
                if len(rep.solution) > k or not is_F_minor_free(g.delete(rep.solution), fam):
                    res.fail(f"instance {idx}: invalid solution {sorted(rep.solution)}")
                hits += rep.weight == opt
        if opt != math.inf:
            freq = hits / seeds
            worst = min(worst, freq)
            if freq < threshold:
                res.fail(f"instance {idx}: success frequency {freq:.3f} below {threshold}")
    res.measured["min_success"] = worst
    return res


# -- report -----------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    family: str = "k3"
    checks: tuple = ("hitting_family", "protrusion_bound", "important_separators", "exhaustive", "sampling_audit")
    mc_runs: int = 100
    fpt_k: int = 2
    fpt_seeds: int = 10
    lca_pairs: int = 200
    seed: int = 0

    def family_spec(self) -> MinorFamilySpec:
        return preset(self.family)


KNOWN_CHECKS = (
    "hitting_family",
    "protrusion_bound",
    "important_separators",
    "lca_closure",
    "exhaustive",
    "sampling_audit",
    "approx_quality",
    "supermartingale",
    "fpt",
)


@dataclass
class VerificationReport:
    corpus: dict
    config: dict
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def constants(self) -> dict:
        out = {}
        for c in self.checks:
            for k, v in c.measured.items():
                out[f"{c.name}.{k}"] = _jsonable(v)
        return out

    def to_json_obj(self) -> dict:
        return {
            "schema": SCHEMA,
            "corpus": self.corpus,
            "config": self.config,
            "passed": self.passed,
            "checks": [c.to_json_obj() for c in self.checks],
            "constants": self.constants(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "passed", "instances", "measured"])
        for c in self.checks:
            w.writerow([c.name, c.passed, c.instances, json.dumps(c.to_json_obj()["measured"], sort_keys=True)])
        return buf.getvalue()


def run_experiments(spec: CorpusSpec, config: ExperimentConfig) -> VerificationReport:
    """Run the enabled checks on the generated corpus; deterministic in (spec, config)."""
    unknown = [c for c in config.checks if c not in KNOWN_CHECKS]
    if unknown:
        raise ConfigError(f"unknown checks {unknown}; choose from {list(KNOWN_CHECKS)}")
    fam = config.family_spec()
    eta = fam.eta
    graphs = generate(spec)
    results = []
    c_corpus = None
    for name in config.checks:
        if name == "hitting_family":
            results.append(check_hitting_family(graphs, eta))
        elif name == "protrusion_bound":
            results.append(check_protrusion_bound(graphs, eta))
        elif name == "important_separators":
            results.append(check_important_separators(graphs, seed=config.seed))
        elif name == "lca_closure":
            results.append(check_lca_closure(config.lca_pairs, config.seed))
        elif name == "exhaustive":
            triples = exhaustive_triples([g for g in graphs if g.n <= 10], fam, seed=config.seed)
            results.append(check_exhaustive(triples, fam))
        elif name == "sampling_audit":
            r = check_audit(graphs, eta)
            c_corpus = r.measured["c_corpus"]
            results.append(r)
        elif name in ("approx_quality", "supermartingale"):
            if c_corpus is None:
                c_corpus = corpus_ratio(graphs, eta)[0]
            if name == "approx_quality":
                # modulator plus exact finish costs at most (c + 1) * opt in expectation
                results.append(check_approx(graphs, fam, config.mc_runs, c_corpus + 1, seed=config.seed))
            else:
                results.append(check_supermartingale(graphs, fam, config.mc_runs, c_corpus, seed=config.seed))
        elif name == "fpt":
            inst = [(g, config.fpt_k) for g in graphs]
            results.append(check_fpt(inst, fam, config.fpt_seeds, seed=config.seed))
    cfg = {
        "family": config.family,
        "checks": list(config.checks),
        "mc_runs": config.mc_runs,
        "fpt_k": config.fpt_k,
        "fpt_seeds": config.fpt_seeds,
        "lca_pairs": config.lca_pairs,
        "seed": config.seed,
    }
    return VerificationReport(spec.to_json_obj(), cfg, results)

