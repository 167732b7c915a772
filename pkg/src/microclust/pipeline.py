"""End-to-end clustering runs with stage timings and file outputs.

Three algorithms share one spectral stage: "mdmsc" (density-derived
pseudo-clusters with curvature-guided splitting), "gbsc" (granular-ball
baseline), and "sc" (plain spectral clustering on the point-level k-NN
graph).  Ablation modes: "single-cluster" starts splitting from the whole
dataset instead of the leader components, "no-split" keeps the leader
components as-is, "compactness-only" splits without the curvature gate.
"""

from __future__ import annotations

import configparser
import json
import os
import time
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .data import Dataset, normalize
from .granular import balls_to_microclusters, gb_generate
from .metrics import metrics_report
from .neighbors import (
    PseudoClusterSet,
    build_pseudo_clusters,
    compute_density,
    compute_knn,
)
from .spectral import (
    build_similarity_matrix,
    count_graph_components,
    knn_adjacency,
    propagate_labels,
    spectral_cluster,
)
from .splitting import SplitConfig, SplitReport, cluster_geometry, split_all

ALGORITHMS = ("mdmsc", "gbsc", "sc")
MODES = ("full", "single-cluster", "no-split", "compactness-only")


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass
class RunConfig:
    algorithm: str = "mdmsc"
    k: int = 10
    lam: float = 1.5
    beta: int = 8
    n_clusters: int = 2
    seed: int = 0
    mode: str = "full"
    input: str | None = None
    labels_col: str | None = None
    out_dir: str = "out"
    runs: int = 10
    normalization: str = "minmax"
    dump_micro: bool = False
    mc_comparison: str = ">"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.n_clusters < 2:
            raise ConfigError("n_clusters must be >= 2")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.lam < 1 or self.beta < 2:
            raise ConfigError("need lam >= 1 and beta >= 2")

    def split_config(self) -> SplitConfig:
        mode = "full" if self.mode == "single-cluster" else self.mode
        return SplitConfig(lam=self.lam, beta=self.beta, mode=mode, mc_comparison=self.mc_comparison)

    @classmethod
    def from_ini(cls, path) -> "RunConfig":
        parser = configparser.ConfigParser()
        read = parser.read(path)
        if not read:
            raise ConfigError(f"cannot read config file {path}")
        if not parser.has_section("run"):
            raise ConfigError(f"{path}: missing [run] section")
        kwargs = {}
        defaults = cls()
        for f in fields(cls):
            if not parser.has_option("run", f.name):
                continue
            raw = parser.get("run", f.name)
            current = getattr(defaults, f.name)
            if isinstance(current, bool):
                kwargs[f.name] = parser.getboolean("run", f.name)
            elif isinstance(current, int):
                kwargs[f.name] = int(raw)
            elif isinstance(current, float):
                kwargs[f.name] = float(raw)
            else:
                kwargs[f.name] = None if raw == "" else raw
        extra = set(parser.options("run")) - {f.name for f in fields(cls)}
        if extra:
            raise ConfigError(f"{path}: unknown option(s) {sorted(extra)}")
        return cls(**kwargs)

    def to_ini(self, path) -> None:
        parser = configparser.ConfigParser()
        parser["run"] = {
            f.name: "" if getattr(self, f.name) is None else str(getattr(self, f.name))
            for f in fields(self)
        }
        with open(path, "w") as fh:
            parser.write(fh)

    def with_overrides(self, **kwargs) -> "RunConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


@dataclass
class ClusteringResult:
    point_labels: np.ndarray
    micro_labels: np.ndarray
    meta: dict
    similarity: np.ndarray | None = None  # populated when dump_micro is set


def _single_cluster_set(ds: Dataset, rho: np.ndarray) -> PseudoClusterSet:
    members = np.arange(ds.n, dtype=np.int64)
    core = int(np.argmax(rho))
    return PseudoClusterSet(
        [members],
        np.zeros(ds.n, dtype=np.int64),
        np.array([core], dtype=np.int64),
        ds.points.mean(axis=0, keepdims=True),
    )


def run_pipeline(ds_raw: Dataset, cfg: RunConfig) -> ClusteringResult:
    """One clustering run; the dataset is normalized per the config."""
    ds = normalize(ds_raw, cfg.normalization)
    warnings: list[str] = []
    timings: dict[str, float] = {}
    clock = time.perf_counter

    t0 = clock()
    if cfg.algorithm == "sc":
        adjacency = knn_adjacency(ds, min(cfg.k, ds.n - 1))
        timings["construction"] = (clock() - t0) * 1e3
        timings["splitting"] = 0.0
        timings["similarity"] = 0.0
        t1 = clock()
        point_labels = spectral_cluster(adjacency, cfg.n_clusters, cfg.seed)
        timings["spectral"] = (clock() - t1) * 1e3
        timings["total"] = sum(timings.values())
        meta = {
            "algorithm": "sc",
            "m": ds.n,
            "n": ds.n,
            "n_star_initial": ds.n,
            "n_star_final": ds.n,
            "timings_ms": timings,
            "warnings": warnings,
            "config": asdict(cfg),
        }
        return ClusteringResult(point_labels, point_labels.copy(), meta)

    report = SplitReport()
    ball_stats = None
    if cfg.algorithm == "gbsc":
        gb_log: list[dict] = []
        balls = gb_generate(ds, min_size=cfg.beta, split_log=gb_log)
        pcs = balls_to_microclusters(balls, ds)
        nt = compute_knn(ds, min(cfg.k, ds.n - 1))
        report.records = gb_log
        timings["construction"] = (clock() - t0) * 1e3
        timings["splitting"] = 0.0  # ball splitting happens inside construction
        n_star_initial = int(pcs.sizes().max())
        ball_stats = [
            {"center": b.center.tolist(), "radius": b.radius, "size": int(b.members.size)}
            for b in balls
        ]
    else:
        nt = compute_knn(ds, min(cfg.k, ds.n - 1))
        if cfg.mode == "single-cluster":
            pcs = _single_cluster_set(ds, compute_density(nt))
        else:
            pcs = build_pseudo_clusters(ds, nt.k, nt=nt)
        timings["construction"] = (clock() - t0) * 1e3
        t1 = clock()
        n_star_initial = int(pcs.sizes().max())
        pcs, report = split_all(pcs, ds, cfg.split_config())
        timings["splitting"] = (clock() - t1) * 1e3
        warnings.extend(report.warnings)

    t2 = clock()
    if pcs.m < cfg.n_clusters:
        raise RuntimeError(
            f"only {pcs.m} micro-cluster(s) for {cfg.n_clusters} requested clusters; "
            f"lower k or beta"
        )
    similarity = build_similarity_matrix(pcs, nt, ds)
    components = count_graph_components(similarity)
    if components > cfg.n_clusters:
        warnings.append(
            f"similarity graph has {components} components for C={cfg.n_clusters}"
        )
    timings["similarity"] = (clock() - t2) * 1e3

    t3 = clock()
    micro_labels = spectral_cluster(similarity, cfg.n_clusters, cfg.seed)
    point_labels = propagate_labels(pcs, micro_labels)
    timings["spectral"] = (clock() - t3) * 1e3
    timings["total"] = sum(timings.values())

    meta = {
        "algorithm": cfg.algorithm,
        "m": pcs.m,
        "n": ds.n,
        "n_star_initial": n_star_initial,
        "n_star_final": int(pcs.sizes().max()),
        "similarity_components": components,
        "split_records": report.records,
        "split_rounds": report.rounds,
        "timings_ms": timings,
        "warnings": warnings,
        "config": asdict(cfg),
    }
    if ball_stats is not None:
        meta["balls"] = ball_stats
    if cfg.dump_micro:
        meta["micro_clusters"] = micro_cluster_dump(pcs, ds, micro_labels)
        return ClusteringResult(point_labels, micro_labels, meta, similarity)
    return ClusteringResult(point_labels, micro_labels, meta)


def micro_cluster_dump(pcs: PseudoClusterSet, ds: Dataset, micro_labels=None) -> list[dict]:
    """Plot-ready micro-cluster records: members, centroid, curvature, compactness.

    ds must be the same (already normalized) dataset the clusters were built on.
    """
    out = []
    for t, members in enumerate(pcs.clusters):
        geom = cluster_geometry(members, ds)
        rec = {
            "id": t,
            "members": members.tolist(),
            "size": int(members.size),
            "centroid": pcs.centroids[t].tolist(),
            "core": int(pcs.cores[t]),
            "mc": None if not np.isfinite(geom.mc) else float(geom.mc),
            "dm": float(geom.dm),
        }
        if micro_labels is not None:
            rec["label"] = int(micro_labels[t])
        out.append(rec)
    return out


def run_repeated(ds_raw: Dataset, cfg: RunConfig):
    """Run the pipeline cfg.runs times with seeds seed+0..runs-1.

    Returns (results, reports): the first result is the base-seed run whose
    labels are written out; reports holds one metrics dict per run when
    ground truth is available (else None).
    """
    results = []
    reports = []
    for r in range(cfg.runs):
        run_cfg = replace(cfg, seed=cfg.seed + r, runs=1)
        res = run_pipeline(ds_raw, run_cfg)
        results.append(res)
        if ds_raw.labels is not None:
            rep = metrics_report(res.point_labels, ds_raw.labels, res.meta["timings_ms"]["total"])
            rep["seed"] = run_cfg.seed
            reports.append(rep)
        else:
            reports.append(None)
    return results, reports


def aggregate_metrics(reports: list[dict], base_seed: int, runs: int) -> dict:
    """Mean/std metrics JSON across per-run reports (schema-conformant)."""
    keys = ("ari", "nmi", "acc", "runtime_ms")
    agg = dict(reports[0])
    for key in keys:
        vals = np.array([r[key] for r in reports], dtype=np.float64)
        agg[key] = float(vals.mean())
        agg.setdefault("std", {})[key] = float(vals.std())
    agg["seed"] = int(base_seed)
    agg["runs"] = int(runs)
    agg["per_run"] = reports
    return agg


def write_json_atomic(payload, path) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path)


def write_labels_csv(labels: np.ndarray, path) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write("label\n")
        fh.writelines(f"{int(v)}\n" for v in labels)
    os.replace(tmp, path)


def write_similarity_csv(similarity: np.ndarray, path) -> None:
    """Dense m x m micro-cluster similarity, one row per line."""
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        for row in similarity:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    os.replace(tmp, path)
