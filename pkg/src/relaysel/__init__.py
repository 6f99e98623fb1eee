"""Delay-constrained relay selection: simulator, learned policies, baselines."""

from .channel import (LinkGains, Topology, constant_gain_sampler, gain_thresholds,
                      is_outage, link_capacity, outage_probability, sample_gains)
from .env import (Action, ActionClass, ActionKind, EnvConfig, EnvState,
                  InvalidActionError, Packet, RelayBuffer, RelayEnv, StepOutcome,
                  decode_features, encode_features, evaluate_policy,
                  valid_action_set, valid_mask_from_codes)
from .agents import (Experience, Metrics, TrainConfig, build_targets, epsilon,
                     generate_experiences, greedy_policy, greedy_rollout,
                     new_table, select_action, state_key, tabular_greedy_action,
                     tabular_train, tabular_update, train)
from .baselines import max_link_policy, max_link_select, random_valid_policy
from .nn import (AdamState, Layer, Network, TargetSpec, adam_step, clone,
                 copy_into, forward, forward_batch, init_network,
                 load_checkpoint, loss_and_gradient, save_checkpoint)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
