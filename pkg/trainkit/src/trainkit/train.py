"""Supervised training of maze controllers.

The controller imitates a proportional goal-seeking rule
a* = clip(gain * (goal_center - s), -1, 1), fitted by Adam on states sampled
from the safe region. The result is a two-hidden-layer ReLU MLP written in
the verifier's model document format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .mazeenv import MazeEnvConfig


@dataclass(frozen=True)
class TrainSpec:
    hidden: tuple[int, int] = (32, 32)
    steps: int = 3000
    batch: int = 256
    lr: float = 1e-3
    gain: float = 5.0
    seed: int = 0

    def __post_init__(self):
        if any(h <= 0 for h in self.hidden):
            raise ValueError("hidden sizes must be positive")


class TrainingDiverged(RuntimeError):
    pass


def target_policy(env: MazeEnvConfig, gain: float):
    center = env.goal_center()

    def policy(s):
        return np.clip(gain * (center - np.asarray(s)), -1.0, 1.0)

    return policy


def _init_params(rng, sizes):
    params = []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        w = rng.normal(scale=np.sqrt(2.0 / fan_in), size=(fan_out, fan_in))
        params.append([w, np.zeros(fan_out)])
    return params


def _forward(params, X):
    acts = [X]
    for i, (w, b) in enumerate(params):
        z = acts[-1] @ w.T + b
        acts.append(np.maximum(z, 0.0) if i < len(params) - 1 else z)
    return acts


def train_controller(env: MazeEnvConfig, spec: TrainSpec) -> dict:
    """Train and return the model document (a JSON-serializable dict)."""
    rng = np.random.default_rng(spec.seed)
    sizes = [2, *spec.hidden, 2]
    params = _init_params(rng, sizes)
    lo = np.array([iv[0] for iv in env.safe])
    hi = np.array([iv[1] for iv in env.safe])

    m = [[np.zeros_like(w), np.zeros_like(b)] for w, b in params]
    v = [[np.zeros_like(w), np.zeros_like(b)] for w, b in params]
    beta1, beta2, eps = 0.9, 0.999, 1e-8

    for t in range(1, spec.steps + 1):
        X = rng.uniform(lo, hi, size=(spec.batch, 2))
        Y = np.clip(spec.gain * (env.goal_center() - X), -1.0, 1.0)
        acts = _forward(params, X)
        err = acts[-1] - Y
        loss = float(np.mean(err ** 2))
        if not np.isfinite(loss):
            raise TrainingDiverged(f"loss diverged at step {t}")

        grad = 2.0 * err / (spec.batch * 2)
        grads = []
        for i in range(len(params) - 1, -1, -1):
            w, _ = params[i]
            gw = grad.T @ acts[i]
            gb = grad.sum(axis=0)
            grads.append((gw, gb))
            if i > 0:
                grad = (grad @ w) * (acts[i] > 0)
        grads.reverse()

        for i, (gw, gb) in enumerate(grads):
            for j, g in enumerate((gw, gb)):
                m[i][j] = beta1 * m[i][j] + (1 - beta1) * g
                v[i][j] = beta2 * v[i][j] + (1 - beta2) * g ** 2
                mhat = m[i][j] / (1 - beta1 ** t)
                vhat = v[i][j] / (1 - beta2 ** t)
                params[i][j] -= spec.lr * mhat / (np.sqrt(vhat) + eps)

    layers = []
    for i, (w, b) in enumerate(params):
        layers.append({
            "weights": w.tolist(),
            "bias": b.tolist(),
            "activation": "relu" if i < len(params) - 1 else "identity",
        })
    return {"input_dim": 2, "output_dim": 2, "layers": layers}


def model_policy(doc: dict):
    """Forward pass over an exported model document (training runtime side)."""
    layers = [(np.array(l["weights"]), np.array(l["bias"]), l["activation"])
              for l in doc["layers"]]

    def policy(s):
        val = np.asarray(s, dtype=float)
        for w, b, act in layers:
            val = w @ val + b
            if act == "relu":
                val = np.maximum(val, 0.0)
        return val

    return policy


def save_model(doc: dict, path: str):
    with open(path, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")
