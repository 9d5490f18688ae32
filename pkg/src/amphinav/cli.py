"""Command-line driver: train, eval, replay, grad-check."""

import argparse
import sys

from .config import ALGOS, ConfigError, load_config
from .world import SCENARIOS, scenario_world


def _add_common(p):
    p.add_argument("--config", help="YAML run configuration")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--algo", choices=ALGOS)
    p.add_argument("--scenario", choices=sorted(SCENARIOS))
    p.add_argument("--no-risers", action="store_true",
                   help="disable the riser columns")
    p.add_argument("--out", help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="amphinav",
        description="Two-media navigation: simulator, recurrent double-critic "
                    "agents, reactive baseline.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train an agent")
    _add_common(p)
    p.add_argument("--episodes", type=int, help="episode budget")
    p.add_argument("--verbose", action="store_true")

    p = sub.add_parser("eval", help="evaluate a checkpoint or the baseline")
    _add_common(p)
    p.add_argument("--checkpoint", help="checkpoint directory (learned agents)")
    p.add_argument("--trials", type=int)
    p.add_argument("--dump-traj", action="store_true",
                   help="write per-trial trajectory CSVs")

    p = sub.add_parser("replay", help="summarize a trajectory CSV")
    p.add_argument("trajectory", help="trajectory CSV file")
    p.add_argument("--out", required=True)

    p = sub.add_parser("grad-check", help="finite-difference check of the "
                                          "training losses")
    p.add_argument("--hidden", type=int, default=32)
    p.add_argument("--seq-len", type=int, nargs="+", default=[1, 8])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-4)
    return parser


def _config_from_args(args) -> "RunConfig":
    overrides = {}
    for key in ("seed", "algo", "scenario", "out", "trials", "episodes"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "no_risers", False):
        overrides["risers"] = False
    return load_config(args.config, overrides)


def cmd_train(args) -> int:
    from .agents.trainer import run_training

    cfg = _config_from_args(args)
    if cfg.algo == "bba":
        print("error: the baseline controller has nothing to train",
              file=sys.stderr)
        return 2
    world, start, _goal = scenario_world(cfg.scenario, cfg.risers, cfg.world)
    episodes = cfg.episodes if cfg.episodes is not None else cfg.hyperparams.max_eps
    _agent, log_path = run_training(
        cfg.algo, world, start, cfg.hyperparams, cfg.seed, cfg.out, episodes,
        hidden_dim=cfg.network.hidden_dim,
        recurrent_critics=cfg.network.recurrent_critics,
        reward=cfg.reward, checkpoint_every=cfg.checkpoint_every,
        verbose=args.verbose)
    print(f"trained {cfg.algo} for {episodes} episodes; log at {log_path}")
    return 0


def cmd_eval(args) -> int:
    from .agents.checkpointing import load_agent
    from .evaluate import (BbaPolicy, GreedyPolicy, MeanPolicy, run_trials,
                           write_eval_csv)

    cfg = _config_from_args(args)
    world, start, goal = scenario_world(cfg.scenario, cfg.risers, cfg.world)
    if cfg.algo == "bba":
        if args.checkpoint:
            print("error: --checkpoint does not apply to the baseline",
                  file=sys.stderr)
            return 2
        policy = BbaPolicy()
        algo = "bba"
    else:
        if not args.checkpoint:
            print("error: --checkpoint required for learned agents",
                  file=sys.stderr)
            return 2
        algo, agent = load_agent(args.checkpoint, expected_algo=cfg.algo)
        policy = GreedyPolicy(agent) if algo == "docrl-d" else MeanPolicy(agent)

    dump = f"{cfg.out}/trajectories" if args.dump_traj else None
    metrics, rows = run_trials(policy, world, start, goal, cfg.seed,
                               cfg.trials, cfg.reward, dump_dir=dump)
    metrics_path, _ = write_eval_csv(cfg.out, algo, cfg.scenario, metrics, rows)
    print(f"{algo} on {cfg.scenario}: {metrics.successes}/{metrics.trials} "
          f"successes; metrics at {metrics_path}")
    return 0


def cmd_replay(args) -> int:
    from .replaycmd import TrajectoryFormatError, analyze_trajectory

    try:
        summary = analyze_trajectory(args.trajectory, args.out)
    except TrajectoryFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"rows {summary['rows']}  t_air {summary['t_air']:.6f}  "
          f"t_water {summary['t_water']:.6f}  "
          f"medium changes {summary['medium_changes']}")
    return 0


def cmd_grad_check(args) -> int:
    from .agents.gradsuite import check_losses

    results = check_losses(hidden_dim=args.hidden,
                           seq_lens=tuple(args.seq_len), seed=args.seed)
    worst = max(results.values())
    for name, err in sorted(results.items()):
        status = "ok" if err <= args.tol else "FAIL"
        print(f"{name:16s} max rel err {err:.3e}  [{status}]")
    print(f"worst {worst:.3e} (tolerance {args.tol:g})")
    return 0 if worst <= args.tol else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            return cmd_train(args)
        if args.command == "eval":
            return cmd_eval(args)
        if args.command == "replay":
            return cmd_replay(args)
        if args.command == "grad-check":
            return cmd_grad_check(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
