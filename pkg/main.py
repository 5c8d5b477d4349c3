#!/usr/bin/env python3
"""
GD-VAE experiments

Main entry point: generate datasets, train models, evaluate error tables and
analyze latent spaces from a JSON run configuration.
"""

import argparse
import logging
import sys

from cli.commands import cmd_analyze, cmd_eval, cmd_generate, cmd_train
from cli.run_config import RunConfig, load_run_config, parse_run_config
from config.errors import GDVAEError
from config.settings import get_settings

COMMANDS = ("generate", "train", "eval", "analyze")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Variational autoencoders with manifold latent spaces for learning dynamics",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py generate --config configs/burgers_u1.json
  python main.py train --config configs/burgers_u1.json --trials 5 --threads 4
  python main.py eval --config configs/burgers_u1.json
  python main.py analyze --config configs/periodic_10d.json
        """,
    )
    parser.add_argument("command", choices=COMMANDS, help="Step to run")
    parser.add_argument("--config", required=True, help="Run configuration (JSON)")
    parser.add_argument("--out", help="Output directory (default: GDVAE_OUTPUT_DIR)")
    parser.add_argument("--trials", type=int, help="Override the number of training trials")
    parser.add_argument("--seed", type=int, help="Override the master seed (unsigned 64-bit)")
    parser.add_argument("--threads", type=int, help="Worker processes (default: GDVAE_THREADS)")
    parser.add_argument("--epochs", type=int, help="Override the number of training epochs")
    parser.add_argument("--no-resume", action="store_true", help="Retrain trials that already have checkpoints")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    config = load_run_config(args.config)
    document = config.model_dump()
    if args.trials is not None:
        document["trials"] = args.trials
    if args.seed is not None:
        document["seed"] = args.seed
    if args.epochs is not None:
        document["training"]["epochs"] = args.epochs
    return parse_run_config(document)


def run(args: argparse.Namespace) -> None:
    settings = get_settings()
    config = resolve_config(args)
    root = settings.resolve_output_dir(args.out or config.output_dir) / config.name
    threads = settings.resolve_threads(args.threads)

    if args.command == "generate":
        cmd_generate(config, root, threads)
    elif args.command == "train":
        cmd_train(config, root, threads, resume=not args.no_resume)
    elif args.command == "eval":
        cmd_eval(config, root, threads)
    else:
        cmd_analyze(config, root)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=get_settings().logging_level(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        run(args)
    except GDVAEError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyboardInterrupt:
        print("\nInterrupted")
        return 130
    return 0


if __name__ == "__main__":
    sys.exit(main())
