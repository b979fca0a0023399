"""Batch entry points: train controllers, evaluate rollouts, build fixtures."""

from __future__ import annotations

import argparse
import os

from .fixtures import make_fixture, write_manifest
from .mazeenv import MazeEnvConfig, goal_reach_rate
from .train import TrainSpec, model_policy, save_model, train_controller


def cmd_train(args) -> int:
    env = MazeEnvConfig(deterministic=not args.ndet)
    spec = TrainSpec(hidden=(args.width, args.width), steps=args.steps,
                     seed=args.seed)
    doc = train_controller(env, spec)
    save_model(doc, args.out)
    rate = goal_reach_rate(env, model_policy(doc), n=args.eval_rollouts,
                           seed=args.seed)
    print(f"wrote {args.out}; goal reach rate {rate:.1%} "
          f"({args.eval_rollouts} rollouts)")
    return 0


def cmd_make_all(args) -> int:
    """Train the standard fixture set and record verdicts."""
    os.makedirs(args.out_dir, exist_ok=True)
    names = []
    for width in (32, 64):
        for det in (True, False):
            tag = f"{'det' if det else 'ndet'}_maze_{width}x{width}"
            env = MazeEnvConfig(deterministic=det)
            doc = train_controller(env, TrainSpec(hidden=(width, width),
                                                  steps=args.steps,
                                                  seed=args.seed))
            model_path = os.path.join(args.out_dir, f"{tag}.model.json")
            save_model(doc, model_path)
            rate = goal_reach_rate(env, model_policy(doc), n=500, seed=args.seed)
            record = make_fixture(model_path, env, tag, args.out_dir,
                                  oracle_samples=args.oracle_samples,
                                  seed=args.seed)
            names.append(tag)
            print(f"{tag}: reach={rate:.1%} oracle_violations="
                  f"{record['oracle_violations']} "
                  f"expected={record['expected_verdict']}")
    manifest = write_manifest(args.out_dir, names)
    print(f"manifest: {manifest}")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="trainkit")
    sub = ap.add_subparsers(dest="command", required=True)

    pt = sub.add_parser("train", help="train one controller")
    pt.add_argument("--width", type=int, default=32)
    pt.add_argument("--ndet", action="store_true")
    pt.add_argument("--steps", type=int, default=3000)
    pt.add_argument("--seed", type=int, default=0)
    pt.add_argument("--eval-rollouts", type=int, default=1000)
    pt.add_argument("--out", required=True)
    pt.set_defaults(func=cmd_train)

    pm = sub.add_parser("make-all", help="train the standard fixture set")
    pm.add_argument("--out-dir", required=True)
    pm.add_argument("--steps", type=int, default=3000)
    pm.add_argument("--seed", type=int, default=0)
    pm.add_argument("--oracle-samples", type=int, default=100_000)
    pm.set_defaults(func=cmd_make_all)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
