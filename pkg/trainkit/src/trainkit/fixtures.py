"""Fixture production: wrap a trained model into a verifier system config,
run the verifier's sampling oracle and inductiveness check, and record the
expected verdict for later regression runs.

The verifier is driven through its CLI (`indinv`); the only shared artifacts
are the model document and the system config file.
"""

from __future__ import annotations

import json
import os
import subprocess

from .mazeenv import MazeEnvConfig

CANDIDATE = [[[0.25, 0.95], [0.55, 0.95]]]


class ToolInvocationError(RuntimeError):
    pass


def system_config(env: MazeEnvConfig, model_filename: str, name: str) -> dict:
    coeff = 0.1 if env.deterministic else \
        [0.1 * env.noise[0], 0.1 * env.noise[1]]
    return {
        "name": name,
        "state_vars": ["x", "y"],
        "action_vars": ["a", "b"],
        "init": [[list(iv) for iv in env.init]],
        "safe": [[list(iv) for iv in env.safe]],
        "candidate": CANDIDATE,
        "controller": {"model_path": model_filename},
        "env": {"modes": [{"update": {
            "x": {"terms": [{"coeff": 1.0, "var": "x"},
                            {"coeff": coeff, "var": "a"}]},
            "y": {"terms": [{"coeff": 1.0, "var": "y"},
                            {"coeff": coeff, "var": "b"}]},
        }}]},
    }


def _run_tool(args: list[str]) -> dict:
    proc = subprocess.run(["indinv", *args, "--format", "structured"],
                          capture_output=True, text=True)
    if proc.returncode == 3 or not proc.stdout.strip():
        raise ToolInvocationError(
            f"indinv {' '.join(args)} failed: {proc.stderr.strip()}")
    return json.loads(proc.stdout)


def make_fixture(model_path: str, env: MazeEnvConfig, name: str,
                 out_dir: str, oracle_samples: int = 100_000,
                 seed: int = 0) -> dict:
    """Write the system config next to the model and record its verdict.

    Expected verdict is "falsified" whenever the sampling oracle finds a
    violating transition; otherwise it is whatever the verifier reports at
    creation time.
    """
    os.makedirs(out_dir, exist_ok=True)
    cfg = system_config(env, os.path.relpath(model_path, out_dir), name)
    cfg_path = os.path.join(out_dir, f"{name}.json")
    with open(cfg_path, "w") as f:
        json.dump(cfg, f, indent=1)

    oracle = _run_tool(["sample-check", cfg_path, str(oracle_samples),
                        "--seed", str(seed)])
    violations = int(oracle["violations"])
    if violations > 0:
        verdict = "falsified"
    else:
        verdict = _run_tool(["verify", cfg_path])["verdict"]

    record = {
        "model": os.path.basename(model_path),
        "system": os.path.basename(cfg_path),
        "candidate": CANDIDATE,
        "oracle_violations": violations,
        "oracle_samples": oracle_samples,
        "oracle_seed": seed,
        "expected_verdict": verdict,
    }
    with open(os.path.join(out_dir, f"{name}.fixture.json"), "w") as f:
        json.dump(record, f, indent=1)
    return record


def verify_verdict(cfg_path: str) -> str:
    """Re-run the verifier on a fixture's system config."""
    return _run_tool(["verify", cfg_path])["verdict"]


def write_manifest(out_dir: str, names: list[str]) -> str:
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as f:
        json.dump({"systems": [f"{n}.json" for n in names]}, f, indent=1)
    return path
