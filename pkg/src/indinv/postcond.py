"""Postcondition providers: the one abstraction the worklist loop queries for
a sound action box given a state box.

Two providers: an NN-backed one delegating to the bound propagation engines,
and a piecewise-constant table over a half-open tiling of the state domain
(used for the mod-4-style analog system and for hand-built fixtures).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import ConfigError, DimensionMismatch
from .geometry import Box
from .network import BoundMethod, NeuralNet, crown_post, eval_network, ibp_post


@dataclass(frozen=True)
class IntervalConstraint:
    """One-dimensional interval with independently open/closed endpoints."""

    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        if self.lo > self.hi or (self.lo == self.hi and (self.lo_open or self.hi_open)):
            raise ValueError(f"empty interval {self}")

    def contains(self, v: float) -> bool:
        if self.lo_open:
            if not v > self.lo:
                return False
        elif not v >= self.lo:
            return False
        if self.hi_open:
            return v < self.hi
        return v <= self.hi

    def intersects_closed(self, lo: float, hi: float) -> bool:
        """Nonempty intersection with the closed interval [lo, hi]."""
        a = max(lo, self.lo)
        b = min(hi, self.hi)
        if a > b:
            return False
        if a < b:
            return True
        # Single candidate point: must satisfy the open endpoints too.
        return self.contains(a)


@dataclass(frozen=True)
class Cell:
    region: tuple[IntervalConstraint, ...]
    action: Box

    def contains_point(self, s) -> bool:
        return all(c.contains(v) for c, v in zip(self.region, s))

    def intersects_box(self, p: Box) -> bool:
        return all(c.intersects_closed(a, b)
                   for c, a, b in zip(self.region, p.lo, p.hi))


def check_table_coverage(cells, domain: Box) -> bool:
    """True iff the cells tile the domain: every point lies in exactly one cell.

    Exact for interval regions: per dimension the membership pattern is
    constant between consecutive endpoints, so testing every endpoint and
    every gap midpoint (cartesian product across dimensions) decides tiling.
    """
    coords = []
    for k in range(domain.dims):
        vals = {domain.lo[k], domain.hi[k]}
        for cell in cells:
            vals.add(cell.region[k].lo)
            vals.add(cell.region[k].hi)
        vals = sorted(v for v in vals if domain.lo[k] <= v <= domain.hi[k])
        probes = list(vals)
        probes += [(a + b) / 2.0 for a, b in zip(vals, vals[1:])]
        coords.append(sorted(probes))
    for point in product(*coords):
        if sum(1 for cell in cells if cell.contains_point(point)) != 1:
            return False
    return True


@dataclass(frozen=True)
class TableProvider:
    """Piecewise-constant controller over a half-open tiling of the domain."""

    domain: Box
    cells: tuple[Cell, ...]

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        for cell in self.cells:
            if len(cell.region) != self.domain.dims:
                raise DimensionMismatch("cell region dims do not match domain")
        if not self.cells or not check_table_coverage(self.cells, self.domain):
            raise ConfigError("table cells do not tile the state domain")
        widths = {cell.action.dims for cell in self.cells}
        if len(widths) != 1:
            raise ConfigError("cells disagree on action dimension")

    @property
    def state_dim(self) -> int:
        return self.domain.dims

    @property
    def action_dim(self) -> int:
        return self.cells[0].action.dims

    def cell_at(self, s) -> Cell:
        for cell in self.cells:
            if cell.contains_point(s):
                return cell
        raise ConfigError(f"state {s} outside the table domain")


@dataclass(frozen=True)
class NNProvider:
    net: NeuralNet
    method: BoundMethod = BoundMethod.CROWN

    @property
    def state_dim(self) -> int:
        return self.net.input_dim

    @property
    def action_dim(self) -> int:
        return self.net.output_dim


PostconditionProvider = NNProvider | TableProvider


def post(provider: PostconditionProvider, p: Box) -> Box:
    """A sound action box: every action reachable from a state in p is inside.

    The table provider returns the coordinatewise hull of the actions of all
    cells whose region meets p (open/closed endpoints respected exactly).
    """
    if p.dims != provider.state_dim:
        raise DimensionMismatch(f"state box has {p.dims} dims, provider expects "
                                f"{provider.state_dim}")
    if isinstance(provider, NNProvider):
        if provider.method is BoundMethod.IBP:
            return ibp_post(provider.net, p)
        return crown_post(provider.net, p)

    hit = [cell.action for cell in provider.cells if cell.intersects_box(p)]
    if not hit:
        raise ConfigError(f"box {p} intersects no table cell")
    lo = tuple(min(a.lo[k] for a in hit) for k in range(provider.action_dim))
    hi = tuple(max(a.hi[k] for a in hit) for k in range(provider.action_dim))
    return Box(lo, hi)


def exact_action(provider: PostconditionProvider, s) -> tuple[float, ...]:
    """The controller's output at a concrete state.

    Table cells carry an action box; its midpoint is the representative
    output (point-valued cells, the common case, are returned exactly).
    """
    if isinstance(provider, NNProvider):
        return tuple(float(v) for v in eval_network(provider.net, s))
    return provider.cell_at(s).action.midpoint()
