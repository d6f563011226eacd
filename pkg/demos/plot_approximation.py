"""
Sampling a cheap deletion set
=============================

The randomized algorithm repeatedly samples a candidate from the exhaustive
families of all protrusions, weighting each candidate by the inverse of its
weight, until the treewidth is small; an exact solver finishes the job. We
compare its weights with the true optimum on a small corpus.
"""

# %%
import numpy as np

from fdeletion import approx_deletion, preset, solve_exact
from fdeletion.harness.corpus import CorpusSpec, generate
from fdeletion.harness.experiments import exact_expected_weight
from fdeletion.treewidth import is_tw_at_most

fam = preset("k3")
spec = CorpusSpec("gnp", (7, 9), {"p": 0.4}, (1, 3), seed=5, count=8)
graphs = [g for g in generate(spec) if not is_tw_at_most(g, fam.eta)]
print(len(graphs), "instances with cycles")

# %%
# One run, with its sampling trace.
g = graphs[0]
rep = approx_deletion(g, fam, rng_seed=1)
print("solution", sorted(rep.solution), "weight", rep.weight, "after", rep.iterations, "samples")
for a, y, sizes in rep.per_iteration:
    print(f"  picked {sorted(y)} from protrusion {sorted(a)}  (members, atoms) = {sizes}")

# %%
# Ratios to the optimum: Monte Carlo means next to the exact expectation,
# which the harness computes by walking the whole sampling tree.
rows = []
for g in graphs:
    _, opt = solve_exact(g, fam)
    ws = [approx_deletion(g, fam, s).weight for s in range(200)]
    exact = exact_expected_weight(g, fam)
    rows.append((opt, np.mean(ws) / opt, float(exact) / opt, max(ws) / opt))
for opt, mc, ex, worst in rows:
    print(f"opt {opt}:  mean ratio {mc:.3f}  exact {ex:.3f}  worst seen {worst:.2f}")
