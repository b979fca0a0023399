"""Closed hyperrectangles, finite unions, splitting, and exact containment.

All region predicates in the checker (candidate invariants, worklist items,
postconditions) are closed axis-aligned boxes or finite unions of them.
Containment and disjointness are decided exactly by box subtraction; there
is no sampling anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import DimensionMismatch, NoSplittableDimension

DEFAULT_MIN_WIDTH = 1e-6


@dataclass(frozen=True)
class Box:
    """A closed box prod_k [lo[k], hi[k]]. Degenerate (point) intervals allowed."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi) or not self.lo:
            raise ValueError("lo/hi must be nonempty and of equal length")
        for a, b in zip(self.lo, self.hi):
            if not a <= b:
                raise ValueError(f"empty interval [{a}, {b}]")
        object.__setattr__(self, "lo", tuple(float(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(float(v) for v in self.hi))

    @property
    def dims(self) -> int:
        return len(self.lo)

    def width(self, k: int) -> float:
        return self.hi[k] - self.lo[k]

    def midpoint(self) -> tuple[float, ...]:
        return tuple((a + b) / 2.0 for a, b in zip(self.lo, self.hi))

    def volume(self) -> float:
        v = 1.0
        for a, b in zip(self.lo, self.hi):
            v *= b - a
        return v

    def contains_point(self, x) -> bool:
        if len(x) != self.dims:
            raise DimensionMismatch(f"point has {len(x)} coords, box has {self.dims}")
        return all(a <= v <= b for v, a, b in zip(x, self.lo, self.hi))

    def contains_box(self, other: "Box") -> bool:
        _check_dims(self, other)
        return all(a <= c and d <= b for a, b, c, d in
                   zip(self.lo, self.hi, other.lo, other.hi))

    def intersects(self, other: "Box") -> bool:
        """Closed-set intersection: touching faces count."""
        _check_dims(self, other)
        return all(a <= d and c <= b for a, b, c, d in
                   zip(self.lo, self.hi, other.lo, other.hi))

    def intersect(self, other: "Box") -> "Box | None":
        _check_dims(self, other)
        lo = tuple(max(a, c) for a, c in zip(self.lo, other.lo))
        hi = tuple(min(b, d) for b, d in zip(self.hi, other.hi))
        if any(a > b for a, b in zip(lo, hi)):
            return None
        return Box(lo, hi)

    def widen(self, eps: float) -> "Box":
        """Outward widening by eps in every dimension."""
        if eps == 0.0:
            return self
        return Box(tuple(a - eps for a in self.lo), tuple(b + eps for b in self.hi))

    def cross(self, other: "Box") -> "Box":
        """Cartesian product, e.g. state box x action box."""
        return Box(self.lo + other.lo, self.hi + other.hi)


@dataclass(frozen=True)
class BoxUnion:
    """A finite union of same-dimension boxes; empty tuple denotes the empty set.

    Members may overlap: the decomposition of a candidate need not be a
    partition.
    """

    dims: int
    boxes: tuple[Box, ...]

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        for b in self.boxes:
            if b.dims != self.dims:
                raise DimensionMismatch(
                    f"union over {self.dims} dims contains a {b.dims}-dim box")

    @classmethod
    def of(cls, *boxes: Box) -> "BoxUnion":
        if not boxes:
            raise ValueError("use BoxUnion(dims, ()) for the empty union")
        return cls(boxes[0].dims, tuple(boxes))

    def contains_point(self, x) -> bool:
        return any(b.contains_point(x) for b in self.boxes)

    def is_empty(self) -> bool:
        return not self.boxes


class SplitKind(Enum):
    ALL_DIMS = "all-dims"
    LONGEST_DIM = "longest-dim"


@dataclass(frozen=True)
class SplitStrategy:
    kind: SplitKind = SplitKind.ALL_DIMS
    min_width: float = DEFAULT_MIN_WIDTH

    def __post_init__(self):
        if self.min_width < 0:
            raise ValueError("min_width must be nonnegative")


def split_box(b: Box, s: SplitStrategy) -> list[Box]:
    """Bisect b at midpoints; children exactly tile b (shared faces overlap).

    ALL_DIMS bisects every dimension wider than min_width (2^m children);
    LONGEST_DIM bisects only the widest splittable dimension, ties broken by
    lowest index.
    """
    splittable = [k for k in range(b.dims) if b.width(k) > s.min_width]
    if not splittable:
        raise NoSplittableDimension(
            f"all widths <= min_width={s.min_width} in box {b}")
    if s.kind is SplitKind.LONGEST_DIM:
        widest = max(splittable, key=lambda k: (b.width(k), -k))
        splittable = [widest]

    children = [b]
    for k in splittable:
        mid = (b.lo[k] + b.hi[k]) / 2.0
        nxt = []
        for c in children:
            lo, hi = list(c.lo), list(c.hi)
            hi[k] = mid
            nxt.append(Box(tuple(lo), tuple(hi)))
            lo, hi = list(c.lo), list(c.hi)
            lo[k] = mid
            nxt.append(Box(tuple(lo), tuple(hi)))
        children = nxt
    return children


def _check_dims(a, b):
    if a.dims != b.dims:
        raise DimensionMismatch(f"{a.dims} vs {b.dims} dimensions")


def _subtract(b: Box, cover: Box) -> list[Box]:
    """Closed boxes covering b minus cover's interior slab by slab.

    At most 2*dims pieces. Pieces are closures of the true set difference;
    for finite unions of closed boxes this keeps containment exact (the
    closure of the remainder is covered iff the remainder is).
    """
    pieces = []
    lo, hi = list(b.lo), list(b.hi)
    for k in range(b.dims):
        if cover.lo[k] > lo[k]:
            left_hi = hi.copy()
            left_hi[k] = min(hi[k], cover.lo[k])
            pieces.append(Box(tuple(lo), tuple(left_hi)))
            lo[k] = cover.lo[k]
        if cover.hi[k] < hi[k]:
            right_lo = lo.copy()
            right_lo[k] = max(lo[k], cover.hi[k])
            pieces.append(Box(tuple(right_lo), tuple(hi)))
            hi[k] = cover.hi[k]
    return pieces


def box_subset_of_union(b: Box, u: BoxUnion) -> bool:
    """Exact decision of b subseteq union(u) by recursive box subtraction."""
    if b.dims != u.dims:
        raise DimensionMismatch(f"{b.dims} vs {u.dims} dimensions")

    def covered(box: Box, rest: tuple[Box, ...]) -> bool:
        if not rest:
            return False
        head, tail = rest[0], rest[1:]
        if not box.intersects(head):
            return covered(box, tail)
        if head.contains_box(box):
            return True
        return all(covered(p, tail) for p in _subtract(box, head))

    return covered(b, u.boxes)


def box_disjoint_from_union(b: Box, u: BoxUnion) -> bool:
    """True iff b meets no member of u (closed semantics: touching intersects)."""
    if b.dims != u.dims:
        raise DimensionMismatch(f"{b.dims} vs {u.dims} dimensions")
    return not any(b.intersects(m) for m in u.boxes)


def union_subset_of_union(a: BoxUnion, u: BoxUnion) -> bool:
    return all(box_subset_of_union(b, u) for b in a.boxes)


def interval_mul(c: tuple[float, float], v: tuple[float, float]) -> tuple[float, float]:
    prods = (c[0] * v[0], c[0] * v[1], c[1] * v[0], c[1] * v[1])
    return min(prods), max(prods)


def interval_affine_eval(terms, offset: tuple[float, float]) -> tuple[float, float]:
    """Exact range of sum(c_i * v_i) + o with each factor independent.

    terms: iterable of ((c_lo, c_hi), (v_lo, v_hi)).
    """
    lo, hi = float(offset[0]), float(offset[1])
    for c, v in terms:
        p_lo, p_hi = interval_mul(c, v)
        lo += p_lo
        hi += p_hi
    return lo, hi
