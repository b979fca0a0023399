import json
import os

import numpy as np
import pytest

from indinv import (Activation, AffineUpdate, Box, BoxUnion, Cell, EnvModel,
                    IntervalConstraint, Layer, Mode, NeuralNet, SystemSpec,
                    TableProvider, VerifyOptions)

SYSTEMS_DIR = os.path.join(os.path.dirname(__file__), "..", "systems")


def systems_path(name: str) -> str:
    return os.path.abspath(os.path.join(SYSTEMS_DIR, name))


def cancellation_net() -> NeuralNet:
    """f(x) = relu(x) - relu(x): exact range {0}, loose under interval bounds."""
    return NeuralNet(1, 1, (
        Layer(np.array([[1.0], [1.0]]), np.zeros(2), Activation.RELU),
        Layer(np.array([[1.0, -1.0]]), np.zeros(1), Activation.IDENTITY)))


def random_net(rng: np.random.Generator, max_layers=3, max_width=16,
               in_dim=None, out_dim=None) -> NeuralNet:
    n_layers = int(rng.integers(1, max_layers + 1))
    widths = [in_dim or int(rng.integers(1, 5))]
    for _ in range(n_layers - 1):
        widths.append(int(rng.integers(1, max_width + 1)))
    widths.append(out_dim or int(rng.integers(1, 5)))
    layers = []
    for i in range(n_layers):
        w = rng.normal(scale=1.5, size=(widths[i + 1], widths[i]))
        b = rng.normal(size=widths[i + 1])
        act = Activation.RELU if (i < n_layers - 1 or rng.random() < 0.5) \
            else Activation.IDENTITY
        layers.append(Layer(w, b, act))
    return NeuralNet(widths[0], widths[-1], tuple(layers))


def random_box(rng: np.random.Generator, dims: int, scale=2.0) -> Box:
    c = rng.normal(scale=scale, size=dims)
    r = rng.uniform(0.0, scale, size=dims)
    return Box(tuple(c - r), tuple(c + r))


def mod4_table() -> TableProvider:
    return TableProvider(
        domain=Box((0.0,), (4.0,)),
        cells=(
            Cell((IntervalConstraint(0.0, 2.0, hi_open=True),), Box((-1.0,), (-1.0,))),
            Cell((IntervalConstraint(2.0, 4.0),), Box((1.0,), (1.0,))),
        ))


def mod4_env() -> EnvModel:
    free = IntervalConstraint(-float("inf"), float("inf"))
    reset = Mode(guard=(free, IntervalConstraint(0.0, float("inf"))),
                 update=(AffineUpdate((), (0.0, 0.0)),))
    step = Mode(guard=(free, IntervalConstraint(-float("inf"), 0.0, hi_open=True)),
                update=(AffineUpdate((((1.0, 1.0), 0),), (1.0, 1.0)),))
    return EnvModel(1, 1, (reset, step))


@pytest.fixture
def mod4_system() -> SystemSpec:
    return SystemSpec(
        name="mod4-analog",
        state_vars=("s",),
        action_vars=("a",),
        init=BoxUnion.of(Box((0.0,), (1.0,))),
        safe=BoxUnion.of(Box((0.0,), (5.0,))),
        candidate=BoxUnion.of(Box((0.0,), (4.0,))),
        provider=mod4_table(),
        env=mod4_env(),
        options=VerifyOptions())


def maze_env(noise: tuple[float, float] | None = None) -> EnvModel:
    """x' = x + k*a, y' = y + k*b with k = 0.1 (det) or 0.1*[0.5,1] (ndet)."""
    k = (0.1, 0.1) if noise is None else (0.1 * noise[0], 0.1 * noise[1])
    free = IntervalConstraint(-float("inf"), float("inf"))
    mode = Mode(
        guard=(free,) * 4,
        update=(AffineUpdate((((1.0, 1.0), 0), (k, 2)), (0.0, 0.0)),
                AffineUpdate((((1.0, 1.0), 1), (k, 3)), (0.0, 0.0))))
    return EnvModel(2, 2, (mode,))


MAZE_INIT = Box((0.3, 0.6), (0.4, 0.7))
MAZE_SAFE = Box((0.22, 0.54), (0.98, 0.98))
MAZE_CANDIDATE = Box((0.25, 0.55), (0.95, 0.95))


def maze_system(provider, name="maze", env=None, options=None) -> SystemSpec:
    return SystemSpec(
        name=name,
        state_vars=("x", "y"),
        action_vars=("a", "b"),
        init=BoxUnion.of(MAZE_INIT),
        safe=BoxUnion.of(MAZE_SAFE),
        candidate=BoxUnion.of(MAZE_CANDIDATE),
        provider=provider,
        env=env or maze_env(),
        options=options or VerifyOptions())


def affine_goal_net() -> NeuralNet:
    return NeuralNet(2, 2, (Layer(np.array([[-1.0, 0.0], [0.0, -1.0]]),
                                  np.array([0.6, 0.75]), Activation.IDENTITY),))


def constant_net(bias=(1.0, 1.0)) -> NeuralNet:
    return NeuralNet(2, 2, (Layer(np.zeros((2, 2)), np.array(bias),
                                  Activation.IDENTITY),))


def save_model_doc(net: NeuralNet, path: str):
    from indinv import save_network
    with open(path, "w") as f:
        f.write(save_network(net))


def load_json(path: str):
    with open(path) as f:
        return json.load(f)
