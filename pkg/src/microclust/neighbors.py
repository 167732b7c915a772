"""Exact k-NN, Gaussian-kernel density, leader links, and pseudo-clusters.

A point's leader is its nearest neighbor with strictly higher density;
points with no leader are cores.  Connecting every point to its leader
yields a forest of in-trees, and each weakly connected component (one core
per tree) is a pseudo-cluster.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .data import Dataset

# KD-trees degrade toward brute force in high dimension; cross over early.
_KDTREE_MAX_DIM = 16
_BRUTE_CHUNK = 512


@dataclass(frozen=True)
class NeighborTable:
    """Per-point neighbor indices and distances, ascending by (distance, index).

    Every row has exactly k entries and never contains the point itself.
    """

    indices: np.ndarray
    distances: np.ndarray
    k: int

    @property
    def n(self) -> int:
        return self.indices.shape[0]

    def to_json(self) -> str:
        """Debug dump of the table."""
        return json.dumps(
            {
                "k": int(self.k),
                "indices": self.indices.tolist(),
                "distances": self.distances.tolist(),
            }
        )


@dataclass(frozen=True)
class LeaderForest:
    """leader[i] is the leader's index or -1; cores are the leaderless points."""

    leader: np.ndarray
    cores: np.ndarray


@dataclass
class PseudoClusterSet:
    """A partition of point indices into micro-clusters.

    clusters[t] holds the sorted member indices of cluster t; assignment maps
    each point to its cluster id; cores[t] is the cluster's root point and
    centroids[t] the arithmetic mean of its members.
    """

    clusters: list[np.ndarray]
    assignment: np.ndarray
    cores: np.ndarray
    centroids: np.ndarray

    @property
    def m(self) -> int:
        return len(self.clusters)

    def sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.clusters], dtype=np.int64)

    def validate(self) -> None:
        n = self.assignment.shape[0]
        total = np.concatenate(self.clusters) if self.clusters else np.array([], dtype=int)
        if total.size != n or np.unique(total).size != n:
            raise ValueError("clusters do not partition the point set")
        for t, members in enumerate(self.clusters):
            if len(members) == 0:
                raise ValueError(f"cluster {t} is empty")
            if not (self.assignment[members] == t).all():
                raise ValueError(f"assignment inconsistent for cluster {t}")


def _row_sort(indices: np.ndarray, distances: np.ndarray):
    """Sort each row by (distance, index) so tie order is deterministic."""
    order = np.lexsort((indices, distances), axis=1)
    rows = np.arange(indices.shape[0])[:, None]
    return indices[rows, order], distances[rows, order]


def _knn_row_exact(points: np.ndarray, i: int, k: int):
    """Exact row recompute for tie-heavy neighborhoods."""
    d = np.linalg.norm(points - points[i], axis=1)
    d[i] = np.inf
    order = np.lexsort((np.arange(points.shape[0]), d))[:k]
    return order, d[order]


def _knn_kdtree(points: np.ndarray, k: int):
    n = points.shape[0]
    # Query two extra slots: one for the query point itself (which lands
    # anywhere in its row when duplicates tie at distance 0) and one to make
    # ties at the kept/dropped boundary visible.
    q = min(k + 2, n)
    tree = cKDTree(points)
    dist, idx = tree.query(points, k=q)
    self_mask = idx == np.arange(n)[:, None]
    dist = np.where(self_mask, np.inf, dist)
    idx, dist = _row_sort(idx, dist)
    out_idx, out_dist = idx[:, :k].copy(), dist[:, :k].copy()
    # The tree's choice among equidistant candidates is arbitrary.  Rows
    # where a real neighbor was dropped at the same distance as the k-th
    # kept one (or where duplicates crowded the query point out of its own
    # results) are recomputed exactly, restoring smallest-index tie order.
    if q > k:
        dropped = dist[:, k]
        suspect = ~self_mask.any(axis=1)
        suspect |= np.isfinite(dropped) & (dropped <= out_dist[:, k - 1])
        for i in np.flatnonzero(suspect):
            out_idx[i], out_dist[i] = _knn_row_exact(points, i, k)
    return out_idx, out_dist


def _knn_brute(points: np.ndarray, k: int):
    # cdist (not the Gram trick) so coincident points get distance exactly 0
    # and exact ties stay exactly tied.
    n = points.shape[0]
    idx_out = np.empty((n, k), dtype=np.int64)
    dist_out = np.empty((n, k), dtype=np.float64)
    q = min(k + 1, n - 1)  # one extra slot exposes ties at the boundary
    for start in range(0, n, _BRUTE_CHUNK):
        stop = min(start + _BRUTE_CHUNK, n)
        d = cdist(points[start:stop], points)
        d[np.arange(stop - start), np.arange(start, stop)] = np.inf  # exclude self
        part = np.argpartition(d, q - 1, axis=1)[:, :q]
        pd = np.take_along_axis(d, part, axis=1)
        pi, pd = _row_sort(part, pd)
        idx_out[start:stop] = pi[:, :k]
        dist_out[start:stop] = pd[:, :k]
        if q > k:
            # argpartition picks arbitrarily among distances tied across the
            # kept/dropped boundary; redo those rows with a full lexsort
            for r in np.flatnonzero(pd[:, k] <= pd[:, k - 1]):
                order = np.lexsort((np.arange(n), d[r]))[:k]
                idx_out[start + r] = order
                dist_out[start + r] = d[r, order]
    return idx_out, dist_out


def compute_knn(ds: Dataset, k: int) -> NeighborTable:
    """Exact Euclidean k nearest neighbors for every point (self excluded).

    k must be >= 1; a request beyond n-1 is clamped to n-1 with a warning.
    Uses a KD-tree up to d=16 and blocked brute force beyond that.
    """
    n = ds.n
    if n < 2:
        raise ValueError("need at least 2 points for neighbor search")
    if k < 1:
        raise ValueError(f"k out of range: {k}")
    if k > n - 1:
        warnings.warn(f"k={k} exceeds n-1={n - 1}; clamping", stacklevel=2)
        k = n - 1
    if ds.d <= _KDTREE_MAX_DIM:
        idx, dist = _knn_kdtree(ds.points, k)
    else:
        idx, dist = _knn_brute(ds.points, k)
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    dist = np.ascontiguousarray(dist, dtype=np.float64)
    idx.setflags(write=False)
    dist.setflags(write=False)
    return NeighborTable(idx, dist, k)


def compute_density(nt: NeighborTable) -> np.ndarray:
    """Density of each point: the sum of Gaussian kernels exp(-dist^2)
    over its k nearest neighbors."""
    return np.exp(-nt.distances**2).sum(axis=1)


def compute_leaders(nt: NeighborTable, rho: np.ndarray) -> LeaderForest:
    """Nearest strictly-higher-density neighbor of each point.

    Rows are already ordered by (distance, index), so the first qualifying
    neighbor is the closest one with the smallest index among ties.  Points
    whose neighborhood has no higher density become cores.
    """
    if rho.shape[0] != nt.n:
        raise ValueError("density vector does not match neighbor table")
    higher = rho[nt.indices] > rho[:, None]
    has = higher.any(axis=1)
    first = higher.argmax(axis=1)
    leader = np.where(has, nt.indices[np.arange(nt.n), first], -1)
    cores = np.flatnonzero(leader == -1)
    return LeaderForest(leader.astype(np.int64), cores.astype(np.int64))


def _components_to_clusters(points: np.ndarray, labels: np.ndarray, m: int):
    order = np.argsort(labels, kind="stable")
    counts = np.bincount(labels, minlength=m)
    bounds = np.cumsum(counts)[:-1]
    clusters = [np.sort(c) for c in np.split(order, bounds)]
    centroids = np.zeros((m, points.shape[1]))
    np.add.at(centroids, labels, points)
    centroids /= counts[:, None]
    return clusters, centroids


def build_pseudo_clusters(ds: Dataset, k: int, nt: NeighborTable | None = None) -> PseudoClusterSet:
    """Construct pseudo-clusters: k-NN -> density -> leaders -> components.

    The number of clusters equals the number of cores (each leader tree
    roots at exactly one).  Pass a precomputed NeighborTable to avoid a
    second k-NN search.
    """
    if nt is None:
        nt = compute_knn(ds, k)
    elif nt.n != ds.n:
        raise ValueError("neighbor table does not match dataset")
    rho = compute_density(nt)
    lf = compute_leaders(nt, rho)

    src = np.flatnonzero(lf.leader >= 0)
    graph = coo_matrix(
        (np.ones(src.size), (src, lf.leader[src])), shape=(ds.n, ds.n)
    )
    m, labels = connected_components(graph, directed=False)

    clusters, centroids = _components_to_clusters(ds.points, labels, m)
    cores = np.full(m, -1, dtype=np.int64)
    for c in lf.cores:
        t = labels[c]
        if cores[t] != -1:
            raise AssertionError("component with more than one core")
        cores[t] = c
    if (cores == -1).any():
        raise AssertionError("component without a core")

    pcs = PseudoClusterSet(clusters, labels.astype(np.int64), cores, centroids)
    pcs.validate()
    return pcs
