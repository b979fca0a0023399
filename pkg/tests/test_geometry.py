import itertools

import numpy as np
import pytest

from indinv import (Box, BoxUnion, SplitKind, SplitStrategy,
                    box_disjoint_from_union, box_subset_of_union,
                    interval_affine_eval, split_box)
from indinv.errors import DimensionMismatch, NoSplittableDimension


def u(*boxes):
    return BoxUnion.of(*boxes)


class TestBoxBasics:
    def test_invalid_interval_rejected(self):
        with pytest.raises(ValueError):
            Box((1.0,), (0.5,))

    def test_point_box_allowed(self):
        b = Box((1.0, 2.0), (1.0, 2.0))
        assert b.volume() == 0.0
        assert b.contains_point((1.0, 2.0))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            Box((0.0,), (1.0,)).intersects(Box((0.0, 0.0), (1.0, 1.0)))


class TestSplit:
    def test_1d_midpoint(self):
        kids = split_box(Box((1.0,), (2.0,)), SplitStrategy())
        assert kids == [Box((1.0,), (1.5,)), Box((1.5,), (2.0,))]

    def test_2d_all_dims_quadrants(self):
        kids = split_box(Box((0.0, 0.0), (1.0, 1.0)), SplitStrategy())
        assert len(kids) == 4
        for k in kids:
            assert all(abs(k.width(d) - 0.5) < 1e-15 for d in range(2))

    def test_longest_dim_only(self):
        kids = split_box(Box((0.0, 0.0), (4.0, 1.0)),
                         SplitStrategy(SplitKind.LONGEST_DIM))
        assert kids == [Box((0.0, 0.0), (2.0, 1.0)), Box((2.0, 0.0), (4.0, 1.0))]

    def test_longest_dim_tie_lowest_index(self):
        kids = split_box(Box((0.0, 0.0), (1.0, 1.0)),
                         SplitStrategy(SplitKind.LONGEST_DIM))
        assert kids == [Box((0.0, 0.0), (0.5, 1.0)), Box((0.5, 0.0), (1.0, 1.0))]

    def test_min_width_floor(self):
        with pytest.raises(NoSplittableDimension):
            split_box(Box((0.0,), (1e-7,)), SplitStrategy())

    def test_narrow_dim_skipped(self):
        s = SplitStrategy(min_width=0.1)
        kids = split_box(Box((0.0, 0.0), (1.0, 0.05)), s)
        assert len(kids) == 2  # only the wide dim bisects
        assert all(k.lo[1] == 0.0 and k.hi[1] == 0.05 for k in kids)

    def test_children_tile_parent(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            d = int(rng.integers(1, 4))
            b = Box(tuple(rng.uniform(-2, 0, d)), tuple(rng.uniform(0.5, 2, d)))
            kids = split_box(b, SplitStrategy())
            assert abs(sum(k.volume() for k in kids) - b.volume()) < 1e-12
            hull_lo = tuple(min(k.lo[i] for k in kids) for i in range(d))
            hull_hi = tuple(max(k.hi[i] for k in kids) for i in range(d))
            assert hull_lo == b.lo and hull_hi == b.hi
            for _ in range(20):
                x = tuple(rng.uniform(b.lo[i], b.hi[i]) for i in range(d))
                assert any(k.contains_point(x) for k in kids)


class TestContainment:
    def test_overlapping_halves_cover(self):
        assert box_subset_of_union(
            Box((0.0, 0.0), (1.0, 1.0)),
            u(Box((0.0, 0.0), (0.6, 1.0)), Box((0.4, 0.0), (1.0, 1.0))))

    def test_gap_uncovered(self):
        assert not box_subset_of_union(
            Box((0.0,), (1.0,)),
            u(Box((0.0,), (0.4,)), Box((0.6,), (1.0,))))

    def test_self_containment(self):
        b = Box((0.1, -3.0), (2.0, -1.0))
        assert box_subset_of_union(b, u(b))

    def test_empty_union_never_covers(self):
        assert not box_subset_of_union(Box((0.0,), (1.0,)), BoxUnion(1, ()))

    def test_touching_closed_cover(self):
        # Two closed halves sharing a single face cover the whole box.
        assert box_subset_of_union(
            Box((0.0,), (1.0,)),
            u(Box((0.0,), (0.5,)), Box((0.5,), (1.0,))))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            box_subset_of_union(Box((0.0,), (1.0,)), BoxUnion(2, ()))


class TestDisjointness:
    def test_separated(self):
        assert box_disjoint_from_union(Box((2.0,), (3.0,)), u(Box((0.0,), (1.0,))))

    def test_touching_counts_as_intersecting(self):
        assert not box_disjoint_from_union(Box((1.0,), (2.0,)), u(Box((0.0,), (1.0,))))

    def test_empty_union_disjoint(self):
        assert box_disjoint_from_union(Box((0.0,), (1.0,)), BoxUnion(1, ()))

    def test_exclusive_with_containment(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            b = random_rational_box(rng, 2)
            uu = BoxUnion(2, tuple(random_rational_box(rng, 2) for _ in range(3)))
            if box_disjoint_from_union(b, uu):
                assert not box_subset_of_union(b, uu)


# --- independent oracles ----------------------------------------------------

GRID_STEP = 0.125  # half the endpoint granularity below


def random_rational_box(rng, dims) -> Box:
    lo = rng.integers(0, 8, size=dims) * 0.25
    hi = lo + rng.integers(0, 8 - (lo / 0.25).astype(int) + 1, size=dims) * 0.25
    return Box(tuple(lo), tuple(hi))


def grid_subset_oracle(b: Box, uu: BoxUnion) -> bool:
    """Dense lattice membership at a step finer than any endpoint gap.

    With all endpoints multiples of 0.25 and probes at multiples of 0.125,
    membership is constant on elementary cells, so the probe set is exact.
    """
    axes = [np.arange(b.lo[k], b.hi[k] + GRID_STEP / 2, GRID_STEP)
            for k in range(b.dims)]
    for point in itertools.product(*axes):
        if not any(m.contains_point(point) for m in uu.boxes):
            return False
    return True


def interval_overlap_oracle(b: Box, uu: BoxUnion) -> bool:
    """Analytic pairwise closed-interval overlap: True iff disjoint."""
    for m in uu.boxes:
        if all(b.lo[k] <= m.hi[k] and m.lo[k] <= b.hi[k] for k in range(b.dims)):
            return False
    return True


def random_instances(seed, count):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        dims = int(rng.integers(1, 4))
        b = random_rational_box(rng, dims)
        members = tuple(random_rational_box(rng, dims)
                        for _ in range(int(rng.integers(0, 5))))
        yield b, BoxUnion(dims, members)


def test_containment_matches_grid_oracle():
    for b, uu in random_instances(11, 2000):
        assert box_subset_of_union(b, uu) == grid_subset_oracle(b, uu)


def test_disjointness_matches_overlap_oracle():
    for b, uu in random_instances(12, 2000):
        assert box_disjoint_from_union(b, uu) == interval_overlap_oracle(b, uu)


class TestIntervalAffine:
    def test_maze_step(self):
        lo, hi = interval_affine_eval([((1, 1), (0.3, 0.4)), ((0.1, 0.1), (-1, 1))],
                                      (0, 0))
        assert (lo, hi) == pytest.approx((0.2, 0.5))

    def test_noisy_coeff_positive_action(self):
        lo, hi = interval_affine_eval([((0.05, 0.1), (0.5, 1))], (0.3, 0.4))
        assert (lo, hi) == pytest.approx((0.325, 0.5))

    def test_noisy_coeff_negative_action(self):
        lo, hi = interval_affine_eval([((0.05, 0.1), (-1, -0.5))], (0.3, 0.4))
        assert (lo, hi) == pytest.approx((0.2, 0.375))

    def test_endpoints_attained_at_corners(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            n = int(rng.integers(0, 4))
            terms = []
            for _ in range(n):
                c = sorted(rng.uniform(-2, 2, 2))
                v = sorted(rng.uniform(-2, 2, 2))
                terms.append(((c[0], c[1]), (v[0], v[1])))
            off = sorted(rng.uniform(-1, 1, 2))
            lo, hi = interval_affine_eval(terms, (off[0], off[1]))
            sums = [0.0]
            for c, v in terms:
                prods = (c[0] * v[0], c[0] * v[1], c[1] * v[0], c[1] * v[1])
                sums = [s + p for s in sums for p in prods]
            vals = [s + o for s in sums for o in off]
            assert min(vals) == pytest.approx(lo)
            assert max(vals) == pytest.approx(hi)
