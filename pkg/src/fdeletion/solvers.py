"""Randomized approximation and FPT algorithms for weighted minor deletion.

The sampling step draws a nonempty candidate ``Y`` from the exhaustive
families of all protrusions in the modulator hitting family, with probability
proportional to ``1 / w(Y)``. Iterating it until the treewidth drops to
``eta`` gives a modulator of expected weight ``O(opt)``; solving exactly on
the bounded-treewidth remainder gives the deletion set. The FPT variant picks
a protrusion uniformly, a budget ``L`` with mass ``2^-L``, and a candidate of
at most ``L`` vertices uniformly, and keeps the best of many repetitions.

All randomness flows from a seeded ``numpy`` generator. Weighted draws use
exact integer cumulative masses and one 64-bit uniform integer, so results do
not depend on floating point.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exact import solve_exact, solve_exact_k
from .exhaustive import exhaustive_family, exhaustive_family_sized
from .graph import WeightedGraph
from .minors import MinorFamilySpec, is_F_minor_free, treewidth_obstructions
from .separations import PreconditionError, build_hitting_family
from .treewidth import is_tw_at_most

MAX_REPETITIONS = 1 << 20


class EmptyCandidateError(RuntimeError):
    """No protrusion offered a nonempty candidate to sample from."""


@dataclass(frozen=True)
class SamplingDistribution:
    """Atoms ``(A, Y, 1/w(Y))``; equal ``Y`` from different ``A`` stay separate."""

    pairs: tuple
    total: Fraction
    family_size: int = 0
    _cum: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_cum", _cumulative([m for _, _, m in self.pairs]))

    def probabilities(self) -> list:
        return [m / self.total for _, _, m in self.pairs]

    def expected_cost(self) -> Fraction:
        # each atom contributes w(Y) * (1/w(Y)) / W
        return Fraction(len(self.pairs)) / self.total

    def to_json_obj(self, g: WeightedGraph) -> dict:
        return {
            "total": str(self.total),
            "pairs": [
                {"A": list(g.sort(a)), "Y": list(g.sort(y)), "mass": str(m)} for a, y, m in self.pairs
            ],
        }


@dataclass
class RunReport:
    solution: frozenset | None
    weight: int | float
    iterations: int
    seed: int
    per_iteration: list = field(default_factory=list)
    status: str = "ok"
    outcomes: list = field(default_factory=list)

    def to_json_obj(self, g: WeightedGraph) -> dict:
        out = {
            "status": self.status,
            "solution": None if self.solution is None else list(g.sort(self.solution)),
            "weight": None if self.solution is None else self.weight,
            "iterations": self.iterations,
            "seed": self.seed,
            "per_iteration": [
                {"A": list(g.sort(a)), "Y": list(g.sort(y)), "family_sizes": sizes}
                for a, y, sizes in self.per_iteration
            ],
        }
        if self.outcomes:
            out["outcomes"] = self.outcomes
        return out


def _cumulative(masses) -> tuple:
    denom = math.lcm(*(Fraction(m).denominator for m in masses))
    cum, acc = [], 0
    for m in masses:
        acc += int(Fraction(m) * denom)
        cum.append(acc << 64)
    return tuple(cum), acc


def _pick(rng: np.random.Generator, cum: tuple, acc: int) -> int:
    u = int(rng.integers(0, 1 << 64, dtype=np.uint64))
    return bisect.bisect_left(cum, u * acc)


def draw_index(rng: np.random.Generator, masses: list) -> int:
    """Index ``i`` with probability ``masses[i] / sum(masses)`` for positive rationals.

    One uniform 64-bit integer ``u`` is mapped to ``x = u * W / 2**64`` and the
    first atom whose cumulative mass reaches ``x`` wins, so a boundary tie goes
    to the lower index.
    """
    return _pick(rng, *_cumulative(masses))


def _check_eta(eta: int, fam: MinorFamilySpec) -> None:
    if fam.eta != eta:
        raise PreconditionError(f"family is configured for eta={fam.eta}, got eta={eta}")


@lru_cache(maxsize=1 << 12)
def sampling_distribution(g: WeightedGraph, eta: int) -> SamplingDistribution:
    """Exact distribution of one sampling step on ``g``."""
    if is_tw_at_most(g, eta):
        raise PreconditionError(f"graph has treewidth at most {eta}")
    obstructions = treewidth_obstructions(eta)
    hf = build_hitting_family(g, eta)
    pairs = []
    for a in hf.protrusions:
        for y, w in exhaustive_family(g, a, obstructions).nonempty():
            pairs.append((a, y, Fraction(1, w)))
    if not pairs:
        raise EmptyCandidateError("no protrusion has a nonempty candidate")
    return SamplingDistribution(tuple(pairs), sum(m for _, _, m in pairs), len(hf))


def _step(g: WeightedGraph, eta: int, rng: np.random.Generator) -> tuple:
    dist = sampling_distribution(g, eta)
    i = _pick(rng, *dist._cum)
    return dist.pairs[i][0], dist.pairs[i][1], dist


def sample_step(g: WeightedGraph, eta: int, fam: MinorFamilySpec, rng_seed: int) -> tuple:
    """One sampled nonempty ``Y`` and the distribution it came from."""
    _check_eta(eta, fam)
    _, y, dist = _step(g, eta, np.random.default_rng(rng_seed))
    return y, dist


def _modulator(g: WeightedGraph, eta: int, rng: np.random.Generator) -> tuple:
    xs: frozenset = frozenset()
    log = []
    cur = g
    while not is_tw_at_most(cur, eta):
        a, y, dist = _step(cur, eta, rng)
        log.append((a, y, [dist.family_size, len(dist.pairs)]))
        xs |= y
        cur = g.delete(xs)
    return xs, log


def approx_modulator(g: WeightedGraph, eta: int, fam: MinorFamilySpec, rng_seed: int) -> RunReport:
    """Treewidth-``eta`` modulator by repeated sampling until the treewidth is small."""
    if eta < 1:
        raise PreconditionError("eta must be at least 1")
    _check_eta(eta, fam)
    xs, log = _modulator(g, eta, np.random.default_rng(rng_seed))
    return RunReport(xs, g.weight_of(xs), len(log), rng_seed, log)


def approx_deletion(g: WeightedGraph, fam: MinorFamilySpec, rng_seed: int) -> RunReport:
    """Modulator for ``fam.eta`` followed by an exact solve of what remains."""
    x1, log = _modulator(g, fam.eta, np.random.default_rng(rng_seed))
    x2, _ = solve_exact(g.delete(x1), fam)
    xs = x1 | x2
    return RunReport(xs, g.weight_of(xs), len(log), rng_seed, log)


# -- FPT ----------------------------------------------------------------------


class _Abort(Exception):
    pass


def _fpt_once(g: WeightedGraph, fam: MinorFamilySpec, k: int, rng: np.random.Generator, log: list) -> frozenset:
    if k == 0:
        if is_F_minor_free(g, fam):
            return frozenset()
        raise _Abort
    if is_tw_at_most(g, fam.eta):
        xs, w = solve_exact_k(g, fam, k)
        if xs is None:
            raise _Abort
        return xs
    hf = build_hitting_family(g, fam.eta)
    prot = hf.protrusions
    a = prot[int(rng.integers(0, len(prot)))]
    ell = 1 + draw_index(rng, [Fraction(1, 2**j) for j in range(1, k + 1)])
    cands = [y for y, _ in exhaustive_family_sized(g, a, fam, ell).nonempty()]
    if not cands:
        raise _Abort
    y = cands[int(rng.integers(0, len(cands)))]
    log.append((a, y, [len(prot), len(cands)]))
    return y | _fpt_once(g.delete(y), fam, k - ell, rng, log)


def default_repetitions(k: int) -> int:
    return min(4**k, MAX_REPETITIONS)


def fpt_k_optimal(
    g: WeightedGraph, fam: MinorFamilySpec, k: int, rng_seed: int, repetitions: int | None = None
) -> RunReport:
    """Best of ``repetitions`` randomized branching runs; ``status`` is "failed" if all abort.

    Repetition ``i`` uses the generator seeded by ``(rng_seed, i)``, so the
    outcome does not depend on execution order.
    """
    if k < 0:
        raise PreconditionError("k must be non-negative")
    reps = default_repetitions(k) if repetitions is None else repetitions
    if reps < 1:
        raise PreconditionError("repetitions must be at least 1")
    best = None
    outcomes = []
    for i in range(reps):
        rng = np.random.default_rng(np.random.SeedSequence([rng_seed, i]))
        log: list = []
        try:
            xs = _fpt_once(g, fam, k, rng, log)
        except _Abort:
            outcomes.append(None)
            continue
        w = g.weight_of(xs)
        outcomes.append(w)
        if best is None or (w, g.sort_key(xs)) < (best[1], g.sort_key(best[0])):
            best = (xs, w, log)
    if best is None:
        return RunReport(None, math.inf, reps, rng_seed, [], "failed", outcomes)
    return RunReport(best[0], best[1], reps, rng_seed, best[2], "ok", outcomes)
