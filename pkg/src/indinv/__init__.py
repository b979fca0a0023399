"""Compositional inductiveness checking for neural-network-controlled systems."""

from .driver import (BridgePredicate, Outcome, Stats, SystemSpec, VerifyOptions,
                     check_inductiveness, check_init_condition,
                     check_safety_condition, concretize_counterexample,
                     sample_check)
from .envmodel import (AffineUpdate, CheckResult, EnvModel, Mode, QueryPolarity,
                       check_env_implication, check_env_refutation,
                       check_totality, emit_smtlib, enabled_modes, env_image)
from .geometry import (Box, BoxUnion, SplitKind, SplitStrategy,
                       box_disjoint_from_union, box_subset_of_union,
                       interval_affine_eval, split_box)
from .network import (Activation, BoundMethod, Layer, NeuralNet, crown_post,
                      eval_network, ibp_post, load_network, save_network)
from .postcond import (Cell, IntervalConstraint, NNProvider, TableProvider,
                       check_table_coverage, exact_action, post)

__all__ = [name for name in dir() if not name.startswith("_")]
