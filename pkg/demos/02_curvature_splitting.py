#!/usr/bin/env python3
"""Manifold curvature in action: when does a micro-cluster split?

Builds three hand-shaped clusters (a straight segment, a right-angle bend,
and a tight 60-degree elbow), prints their MST-path-to-chord curvature
ratios, and runs the split loop on the one that crosses the 1.5 threshold.
"""

import math

import numpy as np

import microclust as mc

spacing = 0.1
t = spacing * np.arange(1, 21)

segment = np.column_stack([t, np.zeros_like(t)])
bend90 = np.vstack([[0, 0], np.column_stack([t, np.zeros_like(t)]),
                    np.column_stack([np.zeros_like(t), t])])
elbow60 = np.vstack([[0, 0], np.column_stack([t, np.zeros_like(t)]),
                     np.column_stack([t * math.cos(math.pi / 3), t * math.sin(math.pi / 3)])])

for name, pts in (("segment", segment), ("right-angle bend", bend90), ("60-degree elbow", elbow60)):
    ds = mc.Dataset(pts)
    geom = mc.cluster_geometry(np.arange(ds.n), ds)
    verdict = "splits" if geom.mc > 1.5 else "stays  "
    print(
        f"{name:>18}: path {geom.path_dist:5.2f} vs chord {geom.euclid_dist:5.2f} "
        f"-> curvature {geom.mc:.3f}  ({verdict} at threshold 1.5)"
    )

print("\nsplitting the elbow:")
ds = mc.Dataset(elbow60)
members = np.arange(ds.n, dtype=np.int64)
single = mc.PseudoClusterSet(
    [members], np.zeros(ds.n, dtype=np.int64), np.array([0]), ds.points.mean(0, keepdims=True)
)
out, report = mc.split_all(single, ds, mc.SplitConfig(lam=1.5, beta=8))
for rec in report.records:
    print(
        f"  split parent of {rec['parent_size']} (MC {rec['mc']:.2f}): "
        f"compactness {rec['dm']:.4f} -> weighted {rec['dm_weight']:.4f}, "
        f"children {rec['child_sizes']}"
    )
for i, cluster in enumerate(out.clusters):
    geom = mc.cluster_geometry(cluster, ds)
    print(f"  child {i}: {cluster.size} points, curvature {geom.mc:.3f}")
