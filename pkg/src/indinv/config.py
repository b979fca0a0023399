"""System configuration documents: JSON in, SystemSpec out.

Boxes are written as [[lo, hi], ...] aligned with the declared variable name
order. The controller is either a model file reference or an inline
piecewise-constant table. See README for a full schema example.
"""

from __future__ import annotations

import json
import os

from .driver import SystemSpec, VerifyOptions
from .envmodel import INF, UNCONSTRAINED, AffineUpdate, EnvModel, Mode
from .errors import ConfigError, IndinvError, ParseError
from .geometry import Box, BoxUnion, SplitKind, SplitStrategy
from .network import BoundMethod, load_network
from .postcond import Cell, IntervalConstraint, NNProvider, TableProvider


def _box(raw, dims: int, where: str) -> Box:
    try:
        if len(raw) != dims:
            raise ConfigError(f"{where}: expected {dims} intervals, got {len(raw)}")
        return Box(tuple(float(iv[0]) for iv in raw),
                   tuple(float(iv[1]) for iv in raw))
    except (TypeError, IndexError, ValueError) as e:
        raise ConfigError(f"{where}: malformed box: {e}") from e


def _box_union(raw, dims: int, where: str) -> BoxUnion:
    if not isinstance(raw, list):
        raise ConfigError(f"{where}: expected a list of boxes")
    return BoxUnion(dims, tuple(_box(b, dims, f"{where}[{i}]")
                                for i, b in enumerate(raw)))


def _interval_constraint(raw, where: str) -> IntervalConstraint:
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected an object with lo/hi")
    lo = raw.get("lo", -INF)
    hi = raw.get("hi", INF)
    try:
        return IntervalConstraint(float(-INF if lo is None else lo),
                                  float(INF if hi is None else hi),
                                  bool(raw.get("lo_open", False)),
                                  bool(raw.get("hi_open", False)))
    except ValueError as e:
        raise ConfigError(f"{where}: {e}") from e


def _coeff_interval(raw, where: str) -> tuple[float, float]:
    if isinstance(raw, (int, float)):
        return float(raw), float(raw)
    try:
        lo, hi = float(raw[0]), float(raw[1])
    except (TypeError, IndexError, ValueError) as e:
        raise ConfigError(f"{where}: expected a number or [lo, hi]: {e}") from e
    if lo > hi:
        raise ConfigError(f"{where}: interval [{lo}, {hi}] is empty")
    return lo, hi


def _controller(raw, state_dim: int, base_dir: str, method: BoundMethod):
    if not isinstance(raw, dict):
        raise ConfigError("controller: expected an object")
    if "model_path" in raw:
        path = os.path.join(base_dir, raw["model_path"])
        try:
            with open(path, "rb") as f:
                return NNProvider(load_network(f.read()), method)
        except OSError as e:
            raise ConfigError(f"controller.model_path: cannot read {path}: {e}") from e
    if "table" in raw:
        t = raw["table"]
        domain = _box(t.get("domain"), state_dim, "controller.table.domain")
        cells = []
        for i, c in enumerate(t.get("cells", [])):
            where = f"controller.table.cells[{i}]"
            region = tuple(_interval_constraint(r, f"{where}.region[{k}]")
                           for k, r in enumerate(c.get("region", [])))
            if len(region) != state_dim:
                raise ConfigError(f"{where}.region: expected {state_dim} intervals")
            action = Box(tuple(float(iv[0]) for iv in c["action"]),
                         tuple(float(iv[1]) for iv in c["action"]))
            cells.append(Cell(region, action))
        return TableProvider(domain, tuple(cells))
    raise ConfigError("controller: needs either model_path or table")


def _env(raw, state_vars, action_vars) -> EnvModel:
    names = list(state_vars) + list(action_vars)
    index = {n: i for i, n in enumerate(names)}
    if not isinstance(raw, dict) or "modes" not in raw:
        raise ConfigError("env: expected an object with a modes list")
    modes = []
    for mi, m in enumerate(raw["modes"]):
        where = f"env.modes[{mi}]"
        guard = [UNCONSTRAINED] * len(names)
        for var, c in (m.get("guard") or {}).items():
            if var not in index:
                raise ConfigError(f"{where}.guard: unknown variable {var!r}")
            guard[index[var]] = _interval_constraint(c, f"{where}.guard.{var}")
        updates = []
        raw_update = m.get("update") or {}
        for uvar in raw_update:
            if uvar not in state_vars:
                raise ConfigError(f"{where}.update: unknown state variable {uvar!r}")
        for sv in state_vars:
            if sv not in raw_update:
                raise ConfigError(f"{where}.update: missing state variable {sv!r}")
            u = raw_update[sv]
            terms = []
            for ti, t in enumerate(u.get("terms", [])):
                tw = f"{where}.update.{sv}.terms[{ti}]"
                if t.get("var") not in index:
                    raise ConfigError(f"{tw}: unknown variable {t.get('var')!r}")
                terms.append((_coeff_interval(t.get("coeff", 1.0), tw),
                              index[t["var"]]))
            offset = _coeff_interval(u.get("offset", 0.0), f"{where}.update.{sv}.offset")
            updates.append(AffineUpdate(tuple(terms), offset))
        modes.append(Mode(tuple(guard), tuple(updates)))
    return EnvModel(len(state_vars), len(action_vars), tuple(modes))


def _options(raw) -> VerifyOptions:
    raw = raw or {}
    try:
        kind = SplitKind(raw.get("split", "all-dims"))
        method = BoundMethod(raw.get("bound_method", "crown"))
    except ValueError as e:
        raise ConfigError(f"options: {e}") from e
    return VerifyOptions(
        split=SplitStrategy(kind, float(raw.get("min_width", SplitStrategy().min_width))),
        bound_method=method,
        max_splits=int(raw.get("max_splits", 100_000)),
        outward_epsilon=float(raw.get("epsilon", 0.0)))


def parse_system(doc: dict, base_dir: str = ".") -> SystemSpec:
    for field in ("state_vars", "action_vars", "init", "safe", "candidate",
                  "controller", "env"):
        if field not in doc:
            raise ConfigError(f"missing required field {field!r}")
    state_vars = tuple(doc["state_vars"])
    action_vars = tuple(doc["action_vars"])
    if not state_vars or not action_vars:
        raise ConfigError("state_vars and action_vars must be nonempty")
    sd = len(state_vars)
    options = _options(doc.get("options"))
    provider = _controller(doc["controller"], sd, base_dir, options.bound_method)
    return SystemSpec(
        name=str(doc.get("name", "unnamed")),
        state_vars=state_vars,
        action_vars=action_vars,
        init=_box_union(doc["init"], sd, "init"),
        safe=_box_union(doc["safe"], sd, "safe"),
        candidate=_box_union(doc["candidate"], sd, "candidate"),
        provider=provider,
        env=_env(doc["env"], state_vars, action_vars),
        options=options)


def load_system(path: str) -> SystemSpec:
    try:
        with open(path) as f:
            doc = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be an object")
    try:
        return parse_system(doc, os.path.dirname(os.path.abspath(path)))
    except IndinvError:
        raise
    except (TypeError, KeyError, ValueError) as e:
        raise ConfigError(f"{path}: {e}") from e


def normalize(doc: dict, base_dir: str = ".") -> dict:
    """Parse then re-serialize a config; idempotent after the first pass."""
    sys = parse_system(doc, base_dir)
    out = dict(doc)
    out["name"] = sys.name
    out["init"] = [[list(pair) for pair in zip(b.lo, b.hi)] for b in sys.init.boxes]
    out["safe"] = [[list(pair) for pair in zip(b.lo, b.hi)] for b in sys.safe.boxes]
    out["candidate"] = [[list(pair) for pair in zip(b.lo, b.hi)]
                        for b in sys.candidate.boxes]
    out["options"] = {
        "split": sys.options.split.kind.value,
        "min_width": sys.options.split.min_width,
        "bound_method": sys.options.bound_method.value,
        "max_splits": sys.options.max_splits,
        "epsilon": sys.options.outward_epsilon,
    }
    return out
