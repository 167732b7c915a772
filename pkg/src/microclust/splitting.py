"""Micro-cluster quality measures and curvature-guided splitting.

A cluster's convexity is judged by its manifold curvature: the ratio of the
MST path distance between the tree-diameter endpoints to their straight-line
distance.  A ratio near 1 means the members lie along a nearly convex set;
large ratios flag curved structures that get split at the endpoints, but only
when the size-weighted compactness of the two candidate children improves on
the parent's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .neighbors import PseudoClusterSet

_MODES = ("full", "no-split", "compactness-only")


@dataclass
class SplitConfig:
    """Knobs for the split loop.

    lam is the curvature threshold (>= 1), beta the minimum splittable size
    (>= 2), max_rounds a safety cap on passes over the work queue (None means
    ceil(10*log2(n))).  mode "no-split" disables splitting entirely and
    "compactness-only" drops the curvature gate; mc_comparison selects strict
    ">" (default) or ">=" against lam.
    """

    lam: float = 1.5
    beta: int = 8
    max_rounds: int | None = None
    mode: str = "full"
    mc_comparison: str = ">"

    def __post_init__(self):
        if self.lam < 1:
            raise ValueError("lam must be >= 1")
        if self.beta < 2:
            raise ValueError("beta must be >= 2")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}")
        if self.mc_comparison not in (">", ">="):
            raise ValueError("mc_comparison must be '>' or '>='")

    def curvature_passes(self, mc: float) -> bool:
        return mc >= self.lam if self.mc_comparison == ">=" else mc > self.lam


@dataclass
class ClusterGeometry:
    """MST, diameter endpoints, curvature, and compactness of one cluster."""

    mst_edges: np.ndarray      # (s-1, 2) global point indices
    mst_weights: np.ndarray    # (s-1,) Euclidean lengths
    endpoints: tuple[int, int] | None
    path_dist: float
    euclid_dist: float
    mc: float
    dm: float


@dataclass
class SplitReport:
    """Audit log of split_all: one record per accepted split, plus warnings."""

    records: list[dict] = field(default_factory=list)
    rounds: int = 0
    warnings: list[str] = field(default_factory=list)


def build_mst(cluster: np.ndarray, ds: Dataset):
    """Minimum spanning tree of the complete Euclidean graph on the members.

    Prim's algorithm over squared distances (square roots taken once at the
    end); deterministic under ties: the frontier vertex with the smallest
    (key, position) wins and the earliest parent is kept.  Returns
    (edges, weights) with edges as global point-index pairs; a singleton
    cluster yields empty arrays.
    """
    members = np.asarray(cluster, dtype=np.int64)
    s = members.size
    if s == 0:
        raise ValueError("cluster is empty")
    if s == 1:
        return np.empty((0, 2), dtype=np.int64), np.empty(0)
    pts = ds.points[members]
    in_tree = np.zeros(s, dtype=bool)
    key = np.full(s, np.inf)
    parent = np.full(s, -1, dtype=np.int64)
    in_tree[0] = True
    key[0] = 0.0
    diff = pts - pts[0]
    d2 = np.einsum("ij,ij->i", diff, diff)
    better = d2 < key
    better[0] = False
    key[better] = d2[better]
    parent[better] = 0

    edges = np.empty((s - 1, 2), dtype=np.int64)
    weights = np.empty(s - 1)
    masked = key.copy()
    masked[0] = np.inf
    for e in range(s - 1):
        u = int(np.argmin(masked))  # first minimum = smallest position on ties
        in_tree[u] = True
        edges[e] = members[parent[u]], members[u]
        weights[e] = masked[u]
        masked[u] = np.inf
        diff = pts - pts[u]
        d2 = np.einsum("ij,ij->i", diff, diff)
        better = (~in_tree) & (d2 < key)
        key[better] = d2[better]
        parent[better] = u
        masked[better] = d2[better]
    np.sqrt(weights, out=weights)
    return edges, weights


def _tree_adjacency(edges: np.ndarray, weights: np.ndarray):
    """CSR-style adjacency over the vertices appearing in the edge list."""
    verts = np.unique(edges)
    pos = {int(v): i for i, v in enumerate(verts)}
    s = verts.size
    deg = np.zeros(s, dtype=np.int64)
    a = np.array([pos[int(v)] for v in edges[:, 0]], dtype=np.int64)
    b = np.array([pos[int(v)] for v in edges[:, 1]], dtype=np.int64)
    np.add.at(deg, a, 1)
    np.add.at(deg, b, 1)
    offs = np.zeros(s + 1, dtype=np.int64)
    np.cumsum(deg, out=offs[1:])
    nbr = np.empty(2 * edges.shape[0], dtype=np.int64)
    wts = np.empty(2 * edges.shape[0])
    cur = offs[:-1].copy()
    for i in range(edges.shape[0]):
        nbr[cur[a[i]]] = b[i]
        wts[cur[a[i]]] = weights[i]
        cur[a[i]] += 1
        nbr[cur[b[i]]] = a[i]
        wts[cur[b[i]]] = weights[i]
        cur[b[i]] += 1
    return verts, offs, nbr, wts


def _farthest_from(start: int, offs, nbr, wts, s: int):
    """Distances from start in the tree; returns (farthest vertex, distances).

    Ties resolve to the smallest vertex position.
    """
    dist = np.full(s, -1.0)
    dist[start] = 0.0
    stack = [start]
    while stack:
        v = stack.pop()
        for j in range(offs[v], offs[v + 1]):
            w = nbr[j]
            if dist[w] < 0:
                dist[w] = dist[v] + wts[j]
                stack.append(w)
    far = int(np.argmax(dist))
    return far, dist


def find_endpoints(mst_edges: np.ndarray, mst_weights: np.ndarray):
    """Tree-diameter endpoints and weighted path length of an MST edge list.

    Two farthest-point sweeps, exact on trees with nonnegative weights.
    Returns ((a, b), path_dist) with a < b.
    """
    if mst_edges.shape[0] < 1:
        raise ValueError("need an MST spanning at least 2 points")
    verts, offs, nbr, wts = _tree_adjacency(mst_edges, mst_weights)
    u, _ = _farthest_from(0, offs, nbr, wts, verts.size)
    v, dist = _farthest_from(u, offs, nbr, wts, verts.size)
    a, b = int(verts[u]), int(verts[v])
    if a > b:
        a, b = b, a
    return (a, b), float(dist[v])


def manifold_curvature(endpoints: tuple[int, int], path_dist: float, ds: Dataset) -> float:
    """path distance / straight-line distance between the endpoints.

    Spatially coincident endpoints give +inf (treated as maximally curved).
    """
    a, b = endpoints
    euclid = float(np.linalg.norm(ds.points[a] - ds.points[b]))
    if euclid == 0.0:
        return math.inf
    return path_dist / euclid


def compactness_dm(cluster: np.ndarray, ds: Dataset) -> float:
    """Mean member distance to the cluster centroid."""
    pts = ds.points[np.asarray(cluster, dtype=np.int64)]
    if pts.shape[0] == 0:
        raise ValueError("cluster is empty")
    centroid = pts.mean(axis=0)
    return float(np.linalg.norm(pts - centroid, axis=1).mean())


def weighted_dm(child1: np.ndarray, child2: np.ndarray, ds: Dataset) -> float:
    """Size-weighted mean of the children's compactness."""
    m1, m2 = len(child1), len(child2)
    if m1 == 0 or m2 == 0:
        raise ValueError("children must be nonempty")
    return (m1 * compactness_dm(child1, ds) + m2 * compactness_dm(child2, ds)) / (m1 + m2)


def cluster_geometry(cluster: np.ndarray, ds: Dataset) -> ClusterGeometry:
    """Full geometry of one cluster; singletons get mc=1 and no endpoints."""
    members = np.asarray(cluster, dtype=np.int64)
    edges, weights = build_mst(members, ds)
    dm = compactness_dm(members, ds)
    if members.size < 2:
        return ClusterGeometry(edges, weights, None, 0.0, 0.0, 1.0, dm)
    endpoints, path_dist = find_endpoints(edges, weights)
    a, b = endpoints
    euclid = float(np.linalg.norm(ds.points[a] - ds.points[b]))
    mc = manifold_curvature(endpoints, path_dist, ds)
    return ClusterGeometry(edges, weights, endpoints, path_dist, euclid, mc, dm)


def _partition_by_endpoints(members: np.ndarray, endpoints: tuple[int, int], ds: Dataset):
    """Assign members to the nearer endpoint; ties go to the smaller index."""
    a, b = endpoints
    da = np.linalg.norm(ds.points[members] - ds.points[a], axis=1)
    db = np.linalg.norm(ds.points[members] - ds.points[b], axis=1)
    to_a = da <= db  # a < b, so equidistant members go to a
    return members[to_a], members[~to_a]


def split_once(cluster: np.ndarray, ds: Dataset, cfg: SplitConfig, geom: ClusterGeometry | None = None):
    """One split attempt; returns (child1, child2) or None.

    A cluster splits only when it is larger than beta, its curvature passes
    the lam gate (skipped in compactness-only mode), both candidate children
    are nonempty, and the weighted child compactness strictly improves on the
    parent's.  Mode no-split always declines.
    """
    members = np.asarray(cluster, dtype=np.int64)
    if cfg.mode == "no-split" or members.size <= cfg.beta or members.size < 2:
        return None
    if geom is None:
        geom = cluster_geometry(members, ds)
    if cfg.mode != "compactness-only" and not cfg.curvature_passes(geom.mc):
        return None
    assert geom.endpoints is not None
    child1, child2 = _partition_by_endpoints(members, geom.endpoints, ds)
    if child1.size == 0 or child2.size == 0:
        return None
    if weighted_dm(child1, child2, ds) >= geom.dm:
        return None
    return child1, child2


def default_max_rounds(n: int) -> int:
    return max(1, math.ceil(10 * math.log2(max(n, 2))))


def split_all(pcs: PseudoClusterSet, ds: Dataset, cfg: SplitConfig):
    """Split every splittable cluster to exhaustion (or the round cap).

    Clusters are processed in ascending id order; children join the next
    round's queue.  Children adopt their endpoint seed as core.  Returns the
    new partition and a SplitReport (one record per accepted split).
    """
    report = SplitReport()
    final: list[tuple[np.ndarray, int]] = []
    pending = [(np.asarray(c, dtype=np.int64), int(pcs.cores[t])) for t, c in enumerate(pcs.clusters)]
    max_rounds = cfg.max_rounds if cfg.max_rounds is not None else default_max_rounds(ds.n)
    next_id = pcs.m

    while pending:
        if report.rounds >= max_rounds:
            report.warnings.append(
                f"max_rounds={max_rounds} reached with {len(pending)} clusters still pending"
            )
            final.extend(pending)
            break
        report.rounds += 1
        next_pending = []
        for members, core in pending:
            geom = None
            if cfg.mode != "no-split" and members.size > cfg.beta and members.size >= 2:
                geom = cluster_geometry(members, ds)
            result = split_once(members, ds, cfg, geom) if geom is not None else None
            if result is None:
                final.append((members, core))
                continue
            child1, child2 = result
            assert geom is not None and geom.endpoints is not None
            e1, e2 = geom.endpoints
            report.records.append(
                {
                    "parent_size": int(members.size),
                    "mc": float(geom.mc) if math.isfinite(geom.mc) else None,
                    "dm": float(geom.dm),
                    "dm_weight": float(weighted_dm(child1, child2, ds)),
                    "child_sizes": [int(child1.size), int(child2.size)],
                    "child_ids": [next_id, next_id + 1],
                }
            )
            next_id += 2
            # Each endpoint lands in its own child (distance 0 wins), so the
            # children adopt the endpoint seeds as cores.
            next_pending.append((child1, e1))
            next_pending.append((child2, e2))
        pending = next_pending

    clusters = [members for members, _ in final]
    cores = np.array([core for _, core in final], dtype=np.int64)
    assignment = np.empty(ds.n, dtype=np.int64)
    centroids = np.empty((len(clusters), ds.d))
    for t, members in enumerate(clusters):
        assignment[members] = t
        centroids[t] = ds.points[members].mean(axis=0)
    out = PseudoClusterSet(clusters, assignment, cores, centroids)
    out.validate()
    return out, report
