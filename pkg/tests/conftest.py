"""Shared fixtures and independent brute-force oracles.

Every oracle here recomputes its quantity by a route different from the
library implementation (all-pairs scans, scipy graph routines, permutation
enumeration) so equivalence tests stay meaningful.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra, minimum_spanning_tree
from scipy.spatial.distance import cdist

from microclust import Dataset


@pytest.fixture
def collinear_triple() -> Dataset:
    return Dataset(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]))


@pytest.fixture
def right_angle_triple() -> Dataset:
    return Dataset(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]))


@pytest.fixture
def spread_quadruple() -> Dataset:
    return Dataset(np.array([[0.0, 0.0], [0.1, 0.0], [10.0, 0.0], [10.1, 0.0]]))


def brute_force_knn(points: np.ndarray, k: int):
    """All-pairs exact k-NN via cdist, rows ordered by (distance, index)."""
    n = points.shape[0]
    dist = cdist(points, points)
    np.fill_diagonal(dist, np.inf)
    idx = np.empty((n, k), dtype=np.int64)
    out = np.empty((n, k))
    for i in range(n):
        order = np.lexsort((np.arange(n), dist[i]))[:k]
        idx[i] = order
        out[i] = dist[i, order]
    return idx, out


def brute_force_mst_weight(points: np.ndarray) -> float:
    """Total MST weight via scipy's sparse-graph routine on the dense matrix."""
    return float(minimum_spanning_tree(cdist(points, points)).sum())


def tree_path_matrix(edges: np.ndarray, weights: np.ndarray, vertices: np.ndarray):
    """All-pairs path lengths on a tree, via scipy Dijkstra."""
    pos = {int(v): i for i, v in enumerate(vertices)}
    s = vertices.size
    rows = [pos[int(a)] for a in edges[:, 0]] + [pos[int(b)] for b in edges[:, 1]]
    cols = [pos[int(b)] for b in edges[:, 1]] + [pos[int(a)] for a in edges[:, 0]]
    graph = csr_matrix((np.concatenate([weights, weights]), (rows, cols)), shape=(s, s))
    return dijkstra(graph, directed=False)


def brute_force_tree_diameter(edges: np.ndarray, weights: np.ndarray) -> float:
    vertices = np.unique(edges)
    return float(tree_path_matrix(edges, weights, vertices).max())


def brute_force_acc(pred, truth) -> float:
    """Best injective label matching by full permutation enumeration."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    pu, pi = np.unique(pred, return_inverse=True)
    tu, ti = np.unique(truth, return_inverse=True)
    counts = np.zeros((pu.size, tu.size), dtype=np.int64)
    np.add.at(counts, (pi, ti), 1)
    r, c = counts.shape
    best = 0
    if r <= c:
        for perm in itertools.permutations(range(c), r):
            best = max(best, sum(counts[i, perm[i]] for i in range(r)))
    else:
        for perm in itertools.permutations(range(r), c):
            best = max(best, sum(counts[perm[j], j] for j in range(c)))
    return best / pred.shape[0]


def brute_force_ari(pred, truth) -> float:
    """Pair-counting ARI over all C(n,2) pairs."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    n = pred.shape[0]
    same_p = pred[:, None] == pred[None, :]
    same_t = truth[:, None] == truth[None, :]
    iu = np.triu_indices(n, k=1)
    a = int((same_p[iu] & same_t[iu]).sum())  # pairs grouped together in both
    total = n * (n - 1) / 2
    # Expected agreement under permutation model (Hubert-Arabie form).
    sum_p = int(same_p[iu].sum())
    sum_t = int(same_t[iu].sum())
    if (sum_p == sum_t == 0) or (sum_p == sum_t == total):
        return 1.0
    expected = sum_p * sum_t / total
    max_index = 0.5 * (sum_p + sum_t)
    return float((a - expected) / (max_index - expected))


def dense_distances(points: np.ndarray) -> np.ndarray:
    return cdist(points, points)
