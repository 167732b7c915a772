import math

import numpy as np
import pytest

from microclust import (
    DataError,
    Dataset,
    generate_synthetic,
    load_csv,
    normalize_minmax,
    save_csv,
)


def test_load_csv_basic(tmp_path):
    path = tmp_path / "three.csv"
    path.write_text("0,0\n1,0\n2,0\n")
    ds = load_csv(path)
    assert ds.n == 3 and ds.d == 2
    assert ds.labels is None
    np.testing.assert_array_equal(ds.points, [[0, 0], [1, 0], [2, 0]])


def test_load_csv_label_column_last(tmp_path):
    path = tmp_path / "labeled.csv"
    path.write_text("0,0,1\n1,0,1\n2,0,0\n")
    ds = load_csv(path, label_column="last")
    assert ds.d == 2
    np.testing.assert_array_equal(ds.labels, [1, 1, 0])


def test_load_csv_header_and_named_label(tmp_path):
    path = tmp_path / "header.csv"
    path.write_text("x,y,cls\n0.5,1.5,a\n1.5,2.5,b\n2.5,0.5,a\n")
    ds = load_csv(path, label_column="cls")
    assert ds.d == 2
    np.testing.assert_array_equal(ds.labels, [0, 1, 0])  # factorized by appearance


def test_load_csv_non_numeric_cell_names_location(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0,0\n1,abc\n")
    with pytest.raises(DataError, match="row 2, column 2"):
        load_csv(path)


def test_load_csv_ragged_row(tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_text("0,0\n1,2,3\n")
    with pytest.raises(DataError, match="row 2"):
        load_csv(path)


def test_load_csv_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(DataError, match="empty"):
        load_csv(path)


def test_load_csv_missing_file(tmp_path):
    with pytest.raises(DataError, match="cannot read"):
        load_csv(tmp_path / "nope.csv")


def test_csv_round_trip_bit_identical(tmp_path):
    rng = np.random.default_rng(5)
    ds = Dataset(rng.standard_normal((20, 3)), rng.integers(0, 3, 20))
    path = tmp_path / "rt.csv"
    save_csv(ds, path)
    back = load_csv(path, label_column="last")
    np.testing.assert_array_equal(back.points, ds.points)
    np.testing.assert_array_equal(back.labels, ds.labels)


def test_dataset_rejects_nan():
    with pytest.raises(DataError, match="NaN"):
        Dataset(np.array([[0.0, np.nan]]))


def test_normalize_minmax_examples():
    ds = Dataset(np.array([[0.0, 7.0, 0.0], [5.0, 7.0, 0.5], [10.0, 7.0, 1.0]]))
    out = normalize_minmax(ds)
    np.testing.assert_allclose(out.points[:, 0], [0, 0.5, 1])
    np.testing.assert_array_equal(out.points[:, 1], [0, 0, 0])  # constant column
    np.testing.assert_array_equal(out.points[:, 2], ds.points[:, 2])  # already [0,1]


def test_normalize_minmax_idempotent_exactly():
    rng = np.random.default_rng(0)
    ds = Dataset(rng.standard_normal((50, 4)) * 13 + 5, rng.integers(0, 2, 50))
    once = normalize_minmax(ds)
    twice = normalize_minmax(once)
    np.testing.assert_array_equal(once.points, twice.points)
    assert (once.points >= 0).all() and (once.points <= 1).all()
    np.testing.assert_array_equal(once.labels, ds.labels)


@pytest.mark.parametrize("kind", ["two-spirals", "blobs", "moons"])
def test_generate_deterministic(kind):
    a = generate_synthetic(kind, 60, 0.1, 7)
    b = generate_synthetic(kind, 60, 0.1, 7)
    np.testing.assert_array_equal(a.points, b.points)
    np.testing.assert_array_equal(a.labels, b.labels)


def test_generate_blobs_zero_noise():
    ds = generate_synthetic("blobs", 100, 0.0, 1)
    assert ds.n == 100
    assert set(np.unique(ds.labels)) == {0, 1, 2}
    # zero noise puts every point exactly on its component center
    for lab in (0, 1, 2):
        pts = ds.points[ds.labels == lab]
        assert (pts == pts[0]).all()
    centers = np.array([ds.points[ds.labels == lab][0] for lab in (0, 1, 2)])
    gaps = np.linalg.norm(centers[:, None] - centers[None, :], axis=2)
    assert gaps[np.triu_indices(3, 1)].min() >= 4.0


def test_generate_unknown_kind():
    with pytest.raises(DataError, match="unknown"):
        generate_synthetic("rings", 50, 0.0, 0)


def test_generate_validates_size_and_noise():
    with pytest.raises(DataError):
        generate_synthetic("blobs", 3, 0.0, 0)
    with pytest.raises(DataError):
        generate_synthetic("blobs", 10, -0.1, 0)


def test_spirals_on_curve_and_disjoint():
    ds = generate_synthetic("two-spirals", 300, 0.0, 7)
    pts, labels = ds.points, ds.labels
    # arms exactly on r = t/16, angle t + arm*pi, t in [2, 16] (equal arc spacing)
    for arm in (0, 1):
        arm_pts = pts[labels == arm]
        radius = np.linalg.norm(arm_pts, axis=1)
        t = radius * 16.0
        expected = np.column_stack(
            [radius * np.cos(t + arm * math.pi), radius * np.sin(t + arm * math.pi)]
        )
        np.testing.assert_allclose(arm_pts, expected, atol=1e-9)
        assert t.min() >= 2.0 - 1e-9 and t.max() <= 16.0 + 1e-9
    a0 = pts[labels == 0]
    a1 = pts[labels == 1]
    cross = np.sqrt(((a0[:, None] - a1[None, :]) ** 2).sum(axis=2)).min()
    assert cross > 0.05  # arms disjoint
    # non-convex: each arm's path length far exceeds its endpoint distance
    for arm_pts in (a0, a1):
        path = np.linalg.norm(np.diff(arm_pts, axis=0), axis=1).sum()
        chord = np.linalg.norm(arm_pts[-1] - arm_pts[0])
        assert path / chord > 1.5


def test_moons_shape():
    ds = generate_synthetic("moons", 200, 0.0, 0)
    upper = ds.points[ds.labels == 0]
    # upper moon sits on the unit half-circle
    np.testing.assert_allclose(np.linalg.norm(upper, axis=1), 1.0, atol=1e-9)
    assert (upper[:, 1] >= -1e-9).all()
