"""Desk-scale maze controller training and fixture production."""

from .fixtures import make_fixture, system_config, verify_verdict, write_manifest
from .mazeenv import MazeEnvConfig, goal_reach_rate, rollout_reaches_goal
from .train import (TrainSpec, TrainingDiverged, model_policy, save_model,
                    target_policy, train_controller)

__all__ = [name for name in dir() if not name.startswith("_")]
