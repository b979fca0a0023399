"""2D maze environment used to train and evaluate controllers.

State (x, y) moves by 0.1 * action per step; the non-deterministic variant
scales the step by a noise factor drawn from [0.5, 1.0].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BoxPair = tuple[tuple[float, float], tuple[float, float]]


@dataclass(frozen=True)
class MazeEnvConfig:
    deterministic: bool = True
    goal: BoxPair = ((0.8, 0.9), (0.8, 0.9))
    safe: BoxPair = ((0.22, 0.98), (0.54, 0.98))
    init: BoxPair = ((0.3, 0.4), (0.6, 0.7))
    step_scale: float = 0.1
    noise: tuple[float, float] = (0.5, 1.0)

    def __post_init__(self):
        for lo, hi in (*self.goal, *self.safe, *self.init):
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
        if not (0.0 < self.noise[0] <= self.noise[1] <= 1.0):
            raise ValueError("noise interval must sit inside (0, 1]")

    def goal_center(self) -> np.ndarray:
        return np.array([(lo + hi) / 2.0 for lo, hi in self.goal])

    def in_goal(self, s) -> bool:
        return all(lo <= v <= hi for v, (lo, hi) in zip(s, self.goal))

    def sample_init(self, rng: np.random.Generator) -> np.ndarray:
        return np.array([rng.uniform(lo, hi) for lo, hi in self.init])

    def step(self, s: np.ndarray, a: np.ndarray,
             rng: np.random.Generator) -> np.ndarray:
        c = 1.0 if self.deterministic else rng.uniform(*self.noise)
        return s + self.step_scale * c * a


def rollout_reaches_goal(env: MazeEnvConfig, policy, s0: np.ndarray,
                         rng: np.random.Generator, max_steps: int = 200) -> bool:
    s = np.array(s0, dtype=float)
    for _ in range(max_steps):
        if env.in_goal(s):
            return True
        s = env.step(s, policy(s), rng)
    return env.in_goal(s)


def goal_reach_rate(env: MazeEnvConfig, policy, n: int = 1000,
                    seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    hits = sum(rollout_reaches_goal(env, policy, env.sample_init(rng), rng)
               for _ in range(n))
    return hits / n
