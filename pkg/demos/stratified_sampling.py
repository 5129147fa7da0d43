"""Walkthrough: drawing a reproducible stratified evaluation subset.

Selection is a pure function of (dataset, seed): ids are ranked by a
splitmix64 key of (seed XOR id-hash), so the same corpus and seed give the
same subset on any machine or language. Changing the seed reshuffles the
selection but never the per-stratum counts.

Run: python demos/stratified_sampling.py
"""

from detecon import StratificationPlan, stratified_sample
from detecon.sampler import stratify_images

# synthetic corpus keyed by image id -> object areas (px^2)
corpus = {}
for i in range(3000):
    if i < 900:
        corpus[i] = [30.0 * 30.0]            # small: area < 1,024
    elif i < 2100:
        corpus[i] = [70.0 * 70.0]            # medium: 1,024..9,216
    else:
        corpus[i] = [150.0 * 150.0, 40.0]    # large by median area

strata = stratify_images(corpus)
print("corpus strata:", {k: len(v) for k, v in strata.items()})

plan = StratificationPlan(targets={"small": 100, "medium": 200, "large": 200}, seed=42)
subset = stratified_sample(corpus, plan)
print(f"drew {len(subset)} ids; first ten: {subset[:10]}")

again = stratified_sample(corpus, plan)
print("identical on rerun:", subset == again)

reseeded = stratified_sample(corpus, StratificationPlan(
    targets={"small": 100, "medium": 200, "large": 200}, seed=43))
print("different selection under seed 43:", subset != reseeded)
overlap = len(set(subset) & set(reseeded))
print(f"overlap between seeds 42 and 43: {overlap}/{len(subset)}")
