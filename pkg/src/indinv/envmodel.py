"""Environment transition relations as guarded affine-interval modes.

A mode fires when its guard (per-variable interval constraints over state and
action variables) is satisfied; its update maps each next-state coordinate to
an affine expression with interval coefficients (interval coefficients and
mode choice are the two sources of nondeterminism). One-step images are exact
per coordinate because each input variable occurs at most once per output.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from enum import Enum

from .errors import ConfigError, DimensionMismatch
from .geometry import (Box, BoxUnion, box_disjoint_from_union,
                       box_subset_of_union, interval_affine_eval)
from .postcond import IntervalConstraint

INF = float("inf")

UNCONSTRAINED = IntervalConstraint(-INF, INF)


@dataclass(frozen=True)
class AffineUpdate:
    """One output coordinate: sum of coeff-interval * input-variable + offset."""

    terms: tuple[tuple[tuple[float, float], int], ...]
    offset: tuple[float, float]

    def __post_init__(self):
        seen = [v for _, v in self.terms]
        if len(seen) != len(set(seen)):
            raise ConfigError("input variable repeated within one update coordinate")

    def image(self, region: Box) -> tuple[float, float]:
        terms = [(c, (region.lo[v], region.hi[v])) for c, v in self.terms]
        return interval_affine_eval(terms, self.offset)

    def eval_at(self, point, term_coeffs, offset_value: float) -> float:
        """Concrete update with one chosen coefficient per term."""
        acc = offset_value
        for (_, v), cv in zip(self.terms, term_coeffs):
            acc += cv * point[v]
        return acc


@dataclass(frozen=True)
class Mode:
    guard: tuple[IntervalConstraint, ...]  # over state then action variables
    update: tuple[AffineUpdate, ...]       # one entry per state coordinate

    def guard_admits(self, point) -> bool:
        """Exact guard membership, strict endpoints respected."""
        return all(g.contains(v) for g, v in zip(self.guard, point))

    def guard_closure_clip(self, region: Box) -> Box | None:
        """Closed closure of guard intersected with region; None if empty."""
        lo = tuple(max(a, g.lo) for a, g in zip(region.lo, self.guard))
        hi = tuple(min(b, g.hi) for b, g in zip(region.hi, self.guard))
        if any(a > b for a, b in zip(lo, hi)):
            return None
        return Box(lo, hi)


@dataclass(frozen=True)
class EnvModel:
    state_dim: int
    action_dim: int
    modes: tuple[Mode, ...]

    def __post_init__(self):
        if not self.modes:
            raise ConfigError("environment needs at least one mode")
        n = self.state_dim + self.action_dim
        for i, m in enumerate(self.modes):
            if len(m.guard) != n:
                raise ConfigError(f"mode {i} guard covers {len(m.guard)} of {n} variables")
            if len(m.update) != self.state_dim:
                raise ConfigError(f"mode {i} update has {len(m.update)} of "
                                  f"{self.state_dim} coordinates")


class Verdict(Enum):
    HOLDS = "holds"
    FAILS = "fails"


@dataclass(frozen=True)
class CheckResult:
    verdict: Verdict
    mode_index: int | None = None
    image: Box | None = None

    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS


def enabled_modes(env: EnvModel, p: Box, psi: Box) -> list[tuple[int, Box]]:
    """Modes whose guard closure meets p x psi, with the clipped closed region.

    Strict guard endpoints are closed-closured: a sound over-approximation.
    """
    if p.dims != env.state_dim or psi.dims != env.action_dim:
        raise DimensionMismatch("state/action box dims do not match the environment")
    region = p.cross(psi)
    out = []
    for i, mode in enumerate(env.modes):
        clipped = mode.guard_closure_clip(region)
        if clipped is not None:
            out.append((i, clipped))
    return out


def env_image(mode: Mode, region: Box) -> Box:
    """Box hull of the one-step image of region under the mode's update."""
    ranges = [u.image(region) for u in mode.update]
    return Box(tuple(r[0] for r in ranges), tuple(r[1] for r in ranges))


def check_env_implication(env: EnvModel, p: Box, psi: Box, target: BoxUnion,
                          epsilon: float = 0.0) -> CheckResult:
    """Does every enabled mode map p x psi inside the target union?

    Vacuously holds when no mode is enabled. Images are widened outward by
    epsilon before the containment check.
    """
    for i, clipped in enabled_modes(env, p, psi):
        img = env_image(env.modes[i], clipped).widen(epsilon)
        if not box_subset_of_union(img, target):
            return CheckResult(Verdict.FAILS, i, img)
    return CheckResult(Verdict.HOLDS)


def check_env_refutation(env: EnvModel, p: Box, psi: Box, target: BoxUnion,
                         epsilon: float = 0.0) -> bool:
    """Does every transition from p x psi exit the target?

    Requires (i) every enabled mode's image disjoint from the target and
    (ii) the enabled guards jointly covering p x psi, so that successors
    actually exist from every point of the region.
    """
    enabled = enabled_modes(env, p, psi)
    if not enabled:
        return False
    for i, clipped in enabled:
        img = env_image(env.modes[i], clipped).widen(epsilon)
        if not box_disjoint_from_union(img, target):
            return False
    region = p.cross(psi)
    guard_cover = BoxUnion(region.dims, tuple(c for _, c in enabled))
    return box_subset_of_union(region, guard_cover)


def check_totality(env: EnvModel, region: Box) -> bool:
    """True iff the union of guard closures contains the region."""
    clips = [m.guard_closure_clip(region) for m in env.modes]
    cover = BoxUnion(region.dims, tuple(c for c in clips if c is not None))
    return box_subset_of_union(region, cover)


# --- SMT-LIB export ---------------------------------------------------------


class QueryPolarity(Enum):
    IMPLICATION = "implication"
    REFUTATION = "refutation"


def _num(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        s = f"{abs(int(v))}.0"
    else:
        s = format(Decimal(repr(abs(v))), "f")
    return f"(- {s})" if v < 0 else s


def _bound(var: str, lo: float, hi: float, lo_open=False, hi_open=False) -> list[str]:
    out = []
    if lo > -INF:
        out.append(f"({'<' if lo_open else '<='} {_num(lo)} {var})")
    if hi < INF:
        out.append(f"({'<' if hi_open else '<='} {var} {_num(hi)})")
    return out


def _conj(parts: list[str]) -> str:
    if not parts:
        return "true"
    if len(parts) == 1:
        return parts[0]
    return "(and " + " ".join(parts) + ")"


def _disj(parts: list[str]) -> str:
    if not parts:
        return "false"
    if len(parts) == 1:
        return parts[0]
    return "(or " + " ".join(parts) + ")"


def emit_smtlib(p: Box, psi: Box, env: EnvModel, target: BoxUnion,
                polarity: QueryPolarity,
                state_names: list[str] | None = None,
                action_names: list[str] | None = None) -> str:
    """SMT-LIB2 script asserting the negation of the requested implication.

    Unsat means the implication is valid. Strict guards are emitted strictly
    (the export is more precise than the internal closure); nondeterministic
    coefficients become bounded fresh constants inside their mode's disjunct.
    Uses QF_LRA, or QF_NRA when a variable is scaled by a non-point interval
    coefficient.
    """
    sn = state_names or [f"s{i}" for i in range(env.state_dim)]
    an = action_names or [f"a{i}" for i in range(env.action_dim)]
    spn = [f"{n}_next" for n in sn]
    names = sn + an

    nonlinear = False
    decls = [f"(declare-const {n} Real)" for n in sn + an + spn]
    extra_decls: list[str] = []
    mode_disjuncts = []
    for mi, mode in enumerate(env.modes):
        parts = []
        for g, var in zip(mode.guard, names):
            parts += _bound(var, g.lo, g.hi, g.lo_open, g.hi_open)
        for j, upd in enumerate(mode.update):
            summands = []
            for ti, (coeff, v) in enumerate(upd.terms):
                if coeff[0] == coeff[1]:
                    summands.append(f"(* {_num(coeff[0])} {names[v]})")
                else:
                    cname = f"c_m{mi}_t{j}_{ti}"
                    extra_decls.append(f"(declare-const {cname} Real)")
                    parts += _bound(cname, coeff[0], coeff[1])
                    summands.append(f"(* {cname} {names[v]})")
                    nonlinear = True
            if upd.offset[0] == upd.offset[1]:
                if upd.offset[0] != 0.0 or not summands:
                    summands.append(_num(upd.offset[0]))
            else:
                oname = f"o_m{mi}_{j}"
                extra_decls.append(f"(declare-const {oname} Real)")
                parts += _bound(oname, upd.offset[0], upd.offset[1])
                summands.append(oname)
            rhs = summands[0] if len(summands) == 1 else "(+ " + " ".join(summands) + ")"
            parts.append(f"(= {spn[j]} {rhs})")
        mode_disjuncts.append(_conj(parts))

    target_disjuncts = []
    for b in target.boxes:
        parts = []
        for var, lo, hi in zip(spn, b.lo, b.hi):
            parts += _bound(var, lo, hi)
        target_disjuncts.append(_conj(parts))
    membership = _disj(target_disjuncts)

    lines = [f"; {polarity.value} query: negation is asserted, unsat <=> valid",
             f"(set-logic {'QF_NRA' if nonlinear else 'QF_LRA'})"]
    lines += decls + extra_decls
    lines.append("(assert " + _conj(sum((_bound(v, lo, hi) for v, lo, hi
                                         in zip(sn, p.lo, p.hi)), [])) + ")")
    lines.append("(assert " + _conj(sum((_bound(v, lo, hi) for v, lo, hi
                                         in zip(an, psi.lo, psi.hi)), [])) + ")")
    lines.append("(assert " + _disj(mode_disjuncts) + ")")
    if polarity is QueryPolarity.IMPLICATION:
        lines.append(f"(assert (not {membership}))")
    else:
        lines.append(f"(assert {membership})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"
