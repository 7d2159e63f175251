"""CLI: `nnbench train` and `nnbench evaluate`.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys

from .evaluate import evaluate, write_report
from .train import TrainConfig, train


def _cmd_train(args):
    if args.config:
        cfg = TrainConfig.load(args.config)
    else:
        cfg = TrainConfig(lr=args.lr, epochs=args.epochs,
                          batch_size=args.batch_size, patience=args.patience,
                          seed=args.seed, augment=not args.no_augment)
    summary = train(args.manifest, args.images_root, cfg, args.out,
                    init_from=args.init_from)
    print(f"best epoch {summary['best_epoch']} "
          f"val_mse {summary['best_val']:.6f} -> {summary['checkpoint']}")


def _cmd_evaluate(args):
    rows = evaluate(args.checkpoint, args.manifest, args.images_root,
                    split=args.split)
    write_report(rows, args.out)
    print(f"{len(rows)} rows -> {args.out}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nnbench")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("train", help="train the CNN on a manifest")
    sp.add_argument("manifest")
    sp.add_argument("images_root")
    sp.add_argument("--out", required=True)
    sp.add_argument("--config", help="JSON training config (overrides flags)")
    sp.add_argument("--init-from", help="warm-start checkpoint")
    sp.add_argument("--lr", type=float, default=1e-3)
    sp.add_argument("--epochs", type=int, default=30)
    sp.add_argument("--batch-size", type=int, default=32)
    sp.add_argument("--patience", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--no-augment", action="store_true")
    sp.set_defaults(func=_cmd_train)

    sp = sub.add_parser("evaluate", help="score a checkpoint on a split")
    sp.add_argument("checkpoint")
    sp.add_argument("manifest")
    sp.add_argument("images_root")
    sp.add_argument("--split", default="test")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_evaluate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    try:
        args.func(args)
    except (ValueError, FileNotFoundError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
