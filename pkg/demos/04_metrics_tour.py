#!/usr/bin/env python3
"""A quick tour of the evaluation metrics on controlled scenarios."""

import numpy as np

import microclust as mc

rng = np.random.default_rng(0)
truth = np.repeat([0, 1, 2], 40)

scenarios = {
    "perfect": truth.copy(),
    "relabeled (2,0,1)": np.array([2, 0, 1])[truth],
    "one swap per class": truth.copy(),
    "half random": truth.copy(),
    "all random": rng.integers(0, 3, truth.size),
    "single cluster": np.zeros_like(truth),
}
scenarios["one swap per class"][[0, 40, 80]] = [1, 2, 0]
idx = rng.choice(truth.size, truth.size // 2, replace=False)
scenarios["half random"][idx] = rng.integers(0, 3, idx.size)

print(f"{'scenario':>20} {'ARI':>8} {'NMI':>8} {'ACC':>8}")
for name, pred in scenarios.items():
    print(
        f"{name:>20} {mc.ari(pred, truth):8.3f} {mc.nmi(pred, truth):8.3f} "
        f"{mc.acc(pred, truth):8.3f}"
    )

print("\nnotes:")
print(" - relabeling never changes a score (matching is label-blind)")
print(" - ARI of independent labelings concentrates near 0, can dip below")
print(" - a constant prediction zeroes NMI by convention and caps ACC at the")
print("   largest class share")
