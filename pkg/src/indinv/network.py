"""Feed-forward ReLU controllers: loading, exact evaluation, and sound output
bounds via interval bound propagation (IBP) or CROWN-style backward linear
relaxation.

The model document is JSON with fields `input_dim`, `output_dim`, `layers`;
each layer carries `weights` (row-major, rows = outputs), `bias`, and
`activation` ("relu" or "identity").
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, ParseError, ShapeError, UnsupportedActivation
from .geometry import Box


class Activation(Enum):
    RELU = "relu"
    IDENTITY = "identity"


class BoundMethod(Enum):
    IBP = "ibp"
    CROWN = "crown"


@dataclass(frozen=True)
class Layer:
    weights: np.ndarray  # shape (out, in)
    bias: np.ndarray     # shape (out,)
    activation: Activation

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        b = np.asarray(self.bias, dtype=float)
        if w.ndim != 2 or b.ndim != 1 or b.shape[0] != w.shape[0]:
            raise ShapeError(f"bias length {b.shape} does not match weight rows {w.shape}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)


@dataclass(frozen=True)
class NeuralNet:
    input_dim: int
    output_dim: int
    layers: tuple[Layer, ...]

    def __post_init__(self):
        width = self.input_dim
        for i, layer in enumerate(self.layers):
            if layer.weights.shape[1] != width:
                raise ShapeError(
                    f"layer {i} expects {layer.weights.shape[1]} inputs, got {width}")
            width = layer.weights.shape[0]
        if width != self.output_dim:
            raise ShapeError(f"last layer has {width} outputs, declared {self.output_dim}")


def load_network(content: bytes | str) -> NeuralNet:
    """Parse and validate a model document."""
    try:
        doc = json.loads(content)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ParseError(f"malformed model document: {e}") from e
    try:
        input_dim = int(doc["input_dim"])
        output_dim = int(doc["output_dim"])
        raw_layers = doc["layers"]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"missing or malformed top-level field: {e}") from e
    layers = []
    for i, raw in enumerate(raw_layers):
        try:
            act_name = raw["activation"]
            weights = np.array(raw["weights"], dtype=float)
            bias = np.array(raw["bias"], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"layer {i} malformed: {e}") from e
        try:
            act = Activation(act_name)
        except ValueError:
            raise UnsupportedActivation(f"layer {i} activation {act_name!r}") from None
        layers.append(Layer(weights, bias, act))
    return NeuralNet(input_dim, output_dim, tuple(layers))


def save_network(net: NeuralNet) -> str:
    doc = {
        "input_dim": net.input_dim,
        "output_dim": net.output_dim,
        "layers": [
            {
                "weights": layer.weights.tolist(),
                "bias": layer.bias.tolist(),
                "activation": layer.activation.value,
            }
            for layer in net.layers
        ],
    }
    return json.dumps(doc, indent=1)


def eval_network(net: NeuralNet, x) -> np.ndarray:
    """Exact forward pass in double precision."""
    v = np.asarray(x, dtype=float)
    if v.shape != (net.input_dim,):
        raise DimensionMismatch(f"input shape {v.shape}, expected ({net.input_dim},)")
    for layer in net.layers:
        v = layer.weights @ v + layer.bias
        if layer.activation is Activation.RELU:
            v = np.maximum(v, 0.0)
    return v


def _check_input_box(net: NeuralNet, p: Box):
    if p.dims != net.input_dim:
        raise DimensionMismatch(f"box has {p.dims} dims, network expects {net.input_dim}")


def _ibp_bounds(net: NeuralNet, p: Box):
    """Per-layer (pre-activation lo, hi) lists plus final post-activation bounds."""
    lo = np.array(p.lo)
    hi = np.array(p.hi)
    pre = []
    for layer in net.layers:
        c = (lo + hi) / 2.0
        r = (hi - lo) / 2.0
        mid = layer.weights @ c + layer.bias
        rad = np.abs(layer.weights) @ r
        lo, hi = mid - rad, mid + rad
        pre.append((lo, hi))
        if layer.activation is Activation.RELU:
            lo = np.maximum(lo, 0.0)
            hi = np.maximum(hi, 0.0)
    return pre, (lo, hi)


def ibp_post(net: NeuralNet, p: Box) -> Box:
    """Sound output box by layerwise interval propagation."""
    _check_input_box(net, p)
    _, (lo, hi) = _ibp_bounds(net, p)
    return Box(tuple(lo), tuple(hi))


def _relu_relaxation(l: np.ndarray, u: np.ndarray):
    """Diagonal linear bounds s_l*z <= relu(z) <= s_u*z + t_u on [l, u].

    Unstable neurons use the chord as upper bound and an area-minimizing
    slope (1 if u >= -l else 0) as lower bound.
    """
    n = l.shape[0]
    s_up = np.zeros(n)
    t_up = np.zeros(n)
    s_lo = np.zeros(n)
    for j in range(n):
        if l[j] >= 0.0:
            s_up[j] = 1.0
            s_lo[j] = 1.0
        elif u[j] <= 0.0:
            pass  # both bounds zero
        else:
            s_up[j] = u[j] / (u[j] - l[j])
            t_up[j] = -u[j] * l[j] / (u[j] - l[j])
            s_lo[j] = 1.0 if u[j] >= -l[j] else 0.0
    return s_lo, s_up, t_up


def crown_post(net: NeuralNet, p: Box) -> Box:
    """Sound output box via backward substitution of linear relaxations.

    Pre-activation bounds for the relaxations come from IBP on prefixes.
    """
    _check_input_box(net, p)
    pre, _ = _ibp_bounds(net, p)
    m = net.output_dim

    # Linear bounds on the network output expressed over layer k's
    # post-activation values; initialized over the (virtual) output of the
    # last layer and pushed back to the input.
    up_a, up_c = np.eye(m), np.zeros(m)
    lo_a, lo_c = np.eye(m), np.zeros(m)

    for k in range(len(net.layers) - 1, -1, -1):
        layer = net.layers[k]
        if layer.activation is Activation.RELU:
            l, u = pre[k]
            s_lo, s_up, t_up = _relu_relaxation(l, u)
            # Positive coefficients take the relaxation matching the bound's
            # direction; negative coefficients take the opposite side.
            up_pos, up_neg = np.maximum(up_a, 0.0), np.minimum(up_a, 0.0)
            lo_pos, lo_neg = np.maximum(lo_a, 0.0), np.minimum(lo_a, 0.0)
            up_c = up_c + up_pos @ t_up
            new_up = up_pos * s_up + up_neg * s_lo
            lo_c = lo_c + lo_neg @ t_up
            new_lo = lo_pos * s_lo + lo_neg * s_up
            up_a, lo_a = new_up, new_lo
        # Through the affine map z = W v + b.
        up_c = up_c + up_a @ layer.bias
        lo_c = lo_c + lo_a @ layer.bias
        up_a = up_a @ layer.weights
        lo_a = lo_a @ layer.weights

    x_lo = np.array(p.lo)
    x_hi = np.array(p.hi)
    hi = up_c + np.maximum(up_a, 0.0) @ x_hi + np.minimum(up_a, 0.0) @ x_lo
    lo = lo_c + np.maximum(lo_a, 0.0) @ x_lo + np.minimum(lo_a, 0.0) @ x_hi
    return Box(tuple(lo), tuple(hi))
