"""The inductiveness checker: worklist loop, bridge accumulation,
falsification with concrete witnesses, and the init/safety containment checks.

Each worklist item is a state box p drawn from the candidate. Its action
postcondition psi is computed once; if every enabled environment mode maps
p x psi back into the candidate, (p, psi) joins the bridge. If every
transition provably exits the candidate, the candidate is not inductive and
(p, psi) is the falsifying region. Otherwise p is split at midpoints and the
children are re-enqueued.
"""

from __future__ import annotations

import json
import os
import time
from collections import deque
from dataclasses import dataclass

import numpy as np

from .envmodel import (EnvModel, QueryPolarity, check_env_implication,
                       check_env_refutation, emit_smtlib)
from .errors import ConfigError
from .geometry import (Box, BoxUnion, SplitStrategy, split_box,
                       union_subset_of_union)
from .errors import NoSplittableDimension
from .network import BoundMethod
from .postcond import PostconditionProvider, exact_action, post


@dataclass(frozen=True)
class VerifyOptions:
    split: SplitStrategy = SplitStrategy()
    bound_method: BoundMethod = BoundMethod.CROWN
    max_splits: int = 100_000
    outward_epsilon: float = 0.0
    smtlib_dir: str | None = None  # write query_<seq>_<line>.smt2 files when set

    def __post_init__(self):
        if self.max_splits < 0:
            raise ValueError("max_splits must be nonnegative")


@dataclass(frozen=True)
class SystemSpec:
    name: str
    state_vars: tuple[str, ...]
    action_vars: tuple[str, ...]
    init: BoxUnion
    safe: BoxUnion
    candidate: BoxUnion
    provider: PostconditionProvider
    env: EnvModel
    options: VerifyOptions = VerifyOptions()

    def __post_init__(self):
        sd, ad = len(self.state_vars), len(self.action_vars)
        if self.env.state_dim != sd or self.env.action_dim != ad:
            raise ConfigError("environment dims do not match declared variables")
        if self.provider.state_dim != sd or self.provider.action_dim != ad:
            raise ConfigError("controller dims do not match declared variables")
        for name, u in (("init", self.init), ("safe", self.safe),
                        ("candidate", self.candidate)):
            if u.dims != sd:
                raise ConfigError(f"{name} boxes have {u.dims} dims, expected {sd}")
        if self.candidate.is_empty():
            raise ConfigError("candidate invariant must be nonempty")


@dataclass(frozen=True)
class BridgePredicate:
    """Ordered (state box, action box) clauses; their disjunction is the bridge."""

    clauses: tuple[tuple[Box, Box], ...]

    def region_union(self, dims: int) -> BoxUnion:
        return BoxUnion(dims, tuple(p for p, _ in self.clauses))


@dataclass(frozen=True)
class Stats:
    splits: int = 0
    smt_queries: int = 0
    nnv_queries: int = 0
    wall_time: float = 0.0


@dataclass(frozen=True)
class Outcome:
    verdict: str  # "proved" | "falsified" | "unknown"
    stats: Stats
    bridge: BridgePredicate | None = None
    fstate: Box | None = None
    fpred: Box | None = None
    witness: tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]] | None = None
    reason: str | None = None

    def to_dict(self, include_timing: bool = True) -> dict:
        d: dict = {"verdict": self.verdict}
        if self.bridge is not None:
            d["bridge"] = [[[list(p.lo), list(p.hi)], [list(a.lo), list(a.hi)]]
                           for p, a in self.bridge.clauses]
        if self.fstate is not None:
            d["fstate"] = [list(self.fstate.lo), list(self.fstate.hi)]
        if self.fpred is not None:
            d["fpred"] = [list(self.fpred.lo), list(self.fpred.hi)]
        if self.witness is not None:
            s, a, sp = self.witness
            d["witness"] = {"state": list(s), "action": list(a), "next_state": list(sp)}
        if self.reason is not None:
            d["reason"] = self.reason
        d["stats"] = {"splits": self.stats.splits,
                      "smt_queries": self.stats.smt_queries,
                      "nnv_queries": self.stats.nnv_queries}
        if include_timing:
            d["stats"]["wall_time_s"] = self.stats.wall_time
        return d

    def canonical_json(self) -> str:
        """Deterministic serialization (timing excluded)."""
        return json.dumps(self.to_dict(include_timing=False), sort_keys=True)


def check_init_condition(sys: SystemSpec) -> bool:
    """Every initial state lies inside the candidate."""
    return union_subset_of_union(sys.init, sys.candidate)


def check_safety_condition(sys: SystemSpec) -> bool:
    """Every candidate state lies inside the safe region."""
    return union_subset_of_union(sys.candidate, sys.safe)


class _QueryLog:
    def __init__(self, directory: str | None):
        self.directory = directory
        self.seq = 0
        if directory:
            os.makedirs(directory, exist_ok=True)

    def record(self, sys: SystemSpec, p: Box, psi: Box, line: str):
        self.seq += 1
        if not self.directory:
            return
        polarity = (QueryPolarity.IMPLICATION if line == "line8"
                    else QueryPolarity.REFUTATION)
        text = emit_smtlib(p, psi, sys.env, sys.candidate, polarity,
                           list(sys.state_vars), list(sys.action_vars))
        path = os.path.join(self.directory, f"query_{self.seq}_{line}.smt2")
        with open(path, "w") as f:
            f.write(text)


def concretize_counterexample(p: Box, psi: Box, sys: SystemSpec):
    """Best-effort concrete witness (s, a, s') from a refuted region.

    s is p's midpoint, a the exact controller output, the mode the first one
    whose guard admits (s, a) exactly, coefficients their interval midpoints.
    Returns None if no mode admits the point or the successor lands back in
    the candidate (closure slack); the region-level refutation stands.
    """
    s = p.midpoint()
    try:
        a = exact_action(sys.provider, s)
    except ConfigError:
        # Table has no cell at s (probe outside its domain); fall back to the
        # action region's midpoint.
        a = psi.midpoint()
    point = tuple(s) + tuple(a)
    for mode in sys.env.modes:
        if not mode.guard_admits(point):
            continue
        sp = tuple(
            u.eval_at(point, [(c[0] + c[1]) / 2.0 for c, _ in u.terms],
                      (u.offset[0] + u.offset[1]) / 2.0)
            for u in mode.update)
        if sys.candidate.contains_point(sp):
            return None
        return (tuple(s), tuple(a), sp)
    return None


def check_inductiveness(sys: SystemSpec) -> Outcome:
    """The compositional worklist check; FIFO and fully deterministic."""
    opts = sys.options
    log = _QueryLog(opts.smtlib_dir)
    t0 = time.perf_counter()
    queue: deque[Box] = deque(sys.candidate.boxes)
    clauses: list[tuple[Box, Box]] = []
    splits = smt = nnv = 0

    def done(**kw) -> Outcome:
        stats = Stats(splits, smt, nnv, time.perf_counter() - t0)
        return Outcome(stats=stats, **kw)

    while queue:
        p = queue.popleft()
        psi = post(sys.provider, p)
        nnv += 1
        smt += 1
        log.record(sys, p, psi, "line8")
        if check_env_implication(sys.env, p, psi, sys.candidate,
                                 opts.outward_epsilon).holds():
            clauses.append((p, psi))
            continue
        smt += 1
        log.record(sys, p, psi, "line11")
        if check_env_refutation(sys.env, p, psi, sys.candidate,
                                opts.outward_epsilon):
            witness = concretize_counterexample(p, psi, sys)
            return done(verdict="falsified", fstate=p, fpred=psi, witness=witness)
        if splits >= opts.max_splits:
            return done(verdict="unknown", reason="split budget exhausted")
        try:
            children = split_box(p, opts.split)
        except NoSplittableDimension:
            return done(verdict="unknown", reason="no splittable dimension left")
        splits += 1
        queue.extend(children)

    return done(verdict="proved", bridge=BridgePredicate(tuple(clauses)))


# --- Sampling oracle --------------------------------------------------------


@dataclass(frozen=True)
class SampleReport:
    samples: int
    violations: int
    no_successor: int
    examples: tuple[tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]], ...]

    def to_dict(self) -> dict:
        return {"samples": self.samples, "violations": self.violations,
                "no_successor": self.no_successor,
                "examples": [{"state": list(s), "action": list(a),
                              "next_state": list(sp)}
                             for s, a, sp in self.examples]}


def _sample_point(rng: np.random.Generator, u: BoxUnion) -> tuple[float, ...]:
    vols = np.array([b.volume() for b in u.boxes])
    if vols.sum() > 0:
        probs = vols / vols.sum()
    else:
        probs = np.full(len(u.boxes), 1.0 / len(u.boxes))
    b = u.boxes[rng.choice(len(u.boxes), p=probs)]
    return tuple(rng.uniform(b.lo[k], b.hi[k]) for k in range(b.dims))


def sample_check(sys: SystemSpec, n: int, seed: int = 0,
                 max_examples: int = 10) -> SampleReport:
    """One-sided falsification oracle for the inductiveness condition.

    Samples states from the candidate, takes the exact controller output and
    one random concrete environment successor, and reports transitions that
    exit the candidate. Violations disprove inductiveness; their absence
    proves nothing.
    """
    if n < 1:
        raise ConfigError("sample count must be >= 1")
    rng = np.random.default_rng(seed)
    violations = 0
    no_successor = 0
    examples = []
    for _ in range(n):
        s = _sample_point(rng, sys.candidate)
        a = exact_action(sys.provider, s)
        point = tuple(s) + tuple(a)
        admissible = [m for m in sys.env.modes if m.guard_admits(point)]
        if not admissible:
            no_successor += 1
            continue
        mode = admissible[rng.integers(len(admissible))]
        sp = tuple(
            u.eval_at(point,
                      [rng.uniform(c[0], c[1]) for c, _ in u.terms],
                      rng.uniform(u.offset[0], u.offset[1]))
            for u in mode.update)
        if not sys.candidate.contains_point(sp):
            violations += 1
            if len(examples) < max_examples:
                examples.append((tuple(s), tuple(a), sp))
    return SampleReport(n, violations, no_successor, tuple(examples))
