import math
from fractions import Fraction

import pytest

from alignedchains.exactness import (
    ColumnEchelon,
    aligned_exactness,
    full_exactness,
    rank_of_columns,
    verify_exactness,
)
from alignedchains.limits import CapExceeded
from alignedchains.trees import build_tree, path_tree, regular_ball


def test_column_echelon_rank():
    ech = ColumnEchelon()
    assert ech.insert({0: Fraction(1), 1: Fraction(2)})
    assert ech.insert({0: Fraction(1)})
    # dependent on the first two
    assert not ech.insert({0: Fraction(3), 1: Fraction(2)})
    assert ech.rank == 2


def test_rank_of_columns_early_stop():
    cols = [{i: Fraction(1)} for i in range(10)]
    assert rank_of_columns(cols, target=4) == 4
    assert rank_of_columns(cols) == 10


def test_full_complex_exact_small():
    for n_points in (1, 2, 3, 5):
        records = full_exactness(n_points, 2)
        assert all(rec.exact for rec in records)
        for rec in records:
            assert rec.dim == math.comb(n_points, rec.degree + 1)


def test_degree_zero_bookkeeping():
    records = full_exactness(4, 0)
    assert records[0].degree == 0
    assert records[0].dim == 4
    # augmentation kernel: dim C0 - 1
    assert records[0].kernel_dim == 3
    assert records[0].image_rank == 3
    assert records[0].exact


def test_aligned_exactness_tripod_and_star():
    tripod = build_tree([(0, 1), (0, 2), (0, 3)])
    assert all(rec.exact for rec in aligned_exactness(tripod, 3))
    star = build_tree([(0, i) for i in range(1, 6)])
    assert all(rec.exact for rec in aligned_exactness(star, 3))


def test_aligned_exactness_path_matches_full():
    # on a path every tuple is aligned, so the subcomplex is the full one
    p = path_tree(6)
    full = full_exactness(6, 3)
    aligned = aligned_exactness(p, 3)
    assert [rec.to_record() for rec in full] == [rec.to_record() for rec in aligned]


def test_membership_must_be_face_closed():
    # size-2 family without its size-1 faces
    def membership(tup):
        return len(tup) != 1 or tup[0] == 0

    with pytest.raises(ValueError, match="closed under faces"):
        verify_exactness(range(4), 1, membership)


def test_dim_cap_enforced():
    with pytest.raises(CapExceeded):
        full_exactness(40, 3, dim_cap=1000)


def test_record_shape():
    rec = full_exactness(5, 1)[1]
    data = rec.to_record()
    assert set(data) == {"degree", "dim", "image_rank", "kernel_dim", "exact"}
    assert data["dim"] == 10


def test_regular_ball_aligned_exact():
    t = regular_ball(3, 2)
    records = aligned_exactness(t, 2)
    assert [rec.exact for rec in records] == [True, True, True]
