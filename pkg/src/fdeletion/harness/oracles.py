"""Brute-force oracles and definition-level verifiers.

Everything here enumerates subsets directly from the definitions and avoids
the library's clever paths where it can, so the checks are independent of
the code they check.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from ..exhaustive import ExhaustiveFamily
from ..graph import WeightedGraph, reach
from ..minors import MinorFamilySpec, is_F_minor_free, treewidth_obstructions
from ..separations import HittingFamily, PreconditionError
from ..solvers import sampling_distribution
from ..treewidth import CapExceeded, is_tw_at_most

MODULATOR_CAP = 12
EXHAUSTIVE_ORACLE_CAP = 10
AUDIT_CAP = 11


def _subsets(vs: tuple, max_size: int | None = None):
    top = len(vs) if max_size is None else min(max_size, len(vs))
    for r in range(top + 1):
        for c in itertools.combinations(vs, r):
            yield frozenset(c)


def _cap(g: WeightedGraph, cap: int, what: str) -> None:
    if g.n > cap:
        raise CapExceeded(f"{what} oracle capped at {cap} vertices, got {g.n}")


# -- treewidth modulators -----------------------------------------------------


@lru_cache(maxsize=1 << 16)
def _tw_ok(g: WeightedGraph, eta: int) -> bool:
    return is_tw_at_most(g, eta)


@lru_cache(maxsize=256)
def all_modulators(g: WeightedGraph, eta: int) -> tuple:
    """Inclusion-minimal ``X`` with ``tw(G - X) <= eta``, by size then vertex order."""
    _cap(g, MODULATOR_CAP, "modulator")
    mods = [x for x in _subsets(g.vertices) if _tw_ok(g.delete(x), eta)]
    modset = set(mods)
    return tuple(x for x in mods if not any(x - {v} in modset for v in x))


def verify_hitting_family(g: WeightedGraph, eta: int, fam: HittingFamily) -> tuple:
    """``(ok, min_fraction)`` of protrusions met by a minimal modulator."""
    _cap(g, MODULATOR_CAP, "modulator")
    prots = fam.protrusions
    if not prots:
        raise PreconditionError("hitting family must be nonempty")
    if _tw_ok(g, eta):
        raise PreconditionError(f"graph has treewidth at most {eta}")
    worst = Fraction(1)
    for x in all_modulators(g, eta):
        hit = sum(1 for p in prots if p & x)
        worst = min(worst, Fraction(hit, len(prots)))
    return worst > 0, worst


# -- important separators -----------------------------------------------------


def brute_important_separators(g: WeightedGraph, v, xs: Iterable, k: int) -> list:
    """Important ``(v, X)``-separators of size at most ``k`` straight from the definition."""
    xs = frozenset(xs)
    pool = tuple(u for u in g.vertices if u != v and u not in xs)

    def separates(s):
        return not (reach(g, [v], s) & xs)

    seps = [s for s in _subsets(pool) if separates(s)]
    regions = {s: reach(g, [v], s) for s in seps}
    out = []
    for s in seps:
        if len(s) > k:
            continue
        if any(separates(s - {u}) for u in s):
            continue
        r = regions[s]
        if any(len(t) <= len(s) and r < regions[t] for t in seps):
            continue
        out.append(s)
    out.sort(key=lambda s: (len(s), g.sort_key(s)))
    return out


# -- hitting sets and optima --------------------------------------------------


@lru_cache(maxsize=256)
def hitting_sets(g: WeightedGraph, fam: MinorFamilySpec) -> frozenset:
    """Every vertex set whose deletion leaves no forbidden minor."""
    _cap(g, 16, "hitting-set")
    return frozenset(x for x in _subsets(g.vertices) if is_F_minor_free(g.delete(x), fam))


@lru_cache(maxsize=1 << 14)
def brute_opt(g: WeightedGraph, fam: MinorFamilySpec, k: int | None = None):
    """Minimum weight hitting set (at most ``k`` vertices when given), ``inf`` if none."""
    best = math.inf
    for x in _subsets(g.vertices, k):
        w = g.weight_of(x)
        if w < best and is_F_minor_free(g.delete(x), fam):
            best = w
    return best


@lru_cache(maxsize=1 << 14)
def brute_opt_eta(g: WeightedGraph, eta: int):
    """Minimum weight treewidth-``eta`` modulator by subset enumeration."""
    best = math.inf
    for x in _subsets(g.vertices):
        w = g.weight_of(x)
        if w < best and _tw_ok(g.delete(x), eta):
            best = w
    return best


# -- exhaustive families ------------------------------------------------------


def verify_exhaustive(
    g: WeightedGraph, a: Iterable, fam_spec: MinorFamilySpec, fam: ExhaustiveFamily, ell: int | None = None
) -> bool:
    """Every hitting set (with ``|X ∩ A| <= ell`` when given) has a no-heavier replacement."""
    _cap(g, EXHAUSTIVE_ORACLE_CAP, "exhaustiveness")
    a = frozenset(a)
    hs = hitting_sets(g, fam_spec)
    cands = [(y, g.weight_of(y)) for y in fam.sets]
    for x in hs:
        if ell is not None and len(x & a) > ell:
            continue
        rest = x - a
        base = g.weight_of(rest)
        budget = g.weight_of(x)
        if not any(base + w <= budget and (rest | y) in hs for y, w in cands):
            return False
    return True


# -- sampling audit -----------------------------------------------------------


def expectation_audit(g: WeightedGraph, eta: int, fam: MinorFamilySpec | None = None) -> tuple:
    """Exact ``(E[w(Y)], E[opt drop], ratio)`` of one sampling step; ratio is ``inf`` if no drop."""
    _cap(g, AUDIT_CAP, "audit")
    if fam is not None and fam.eta != eta:
        raise PreconditionError(f"family is configured for eta={fam.eta}, got eta={eta}")
    if _tw_ok(g, eta):
        raise PreconditionError(f"graph has treewidth at most {eta}")
    dist = sampling_distribution(g, eta)
    base = brute_opt_eta(g, eta)
    e_cost = Fraction(0)
    e_drop = Fraction(0)
    for _, y, m in dist.pairs:
        p = m / dist.total
        e_cost += g.weight_of(y) * p
        e_drop += (base - brute_opt_eta(g.delete(y), eta)) * p
    ratio = e_cost / e_drop if e_drop else math.inf
    return e_cost, e_drop, ratio


def tw_obstruction_opt(g: WeightedGraph, eta: int):
    """Minimum modulator weight computed through forbidden minors instead of treewidth tests."""
    return brute_opt(g, treewidth_obstructions(eta))
