"""`neurocc-trainer` entry point: train and predict subcommands."""

import argparse
import sys
from pathlib import Path

from .config import ConfigError, ModelConfig, PRESETS
from .data import read_lines, read_split_ids, write_predictions
from .decode import predict_lines
from .model import CheckpointMismatch, load_checkpoint
from .train import train


def _load_config(args):
    if args.config:
        return ModelConfig.from_file(args.config)
    if args.preset:
        return PRESETS[args.preset]
    return ModelConfig()


def cmd_train(args):
    config = _load_config(args)
    if args.epochs is not None:
        config.epochs = args.epochs
    corpus = Path(args.corpus)
    suffix = args.suffix
    src_lines = read_lines(corpus / f"train.c.{suffix}")
    tgt_lines = read_lines(corpus / f"train.asm.{suffix}")
    valid_src = valid_tgt = None
    if (corpus / f"valid.c.{suffix}").exists():
        valid_src = read_lines(corpus / f"valid.c.{suffix}")
        valid_tgt = read_lines(corpus / f"valid.asm.{suffix}")
    train(config, src_lines, tgt_lines, args.out,
          valid_src=valid_src, valid_tgt=valid_tgt)
    print(f"checkpoint: {Path(args.out) / 'checkpoint_last.pt'}")
    return 0


def cmd_predict(args):
    model, vocab, config, _ = load_checkpoint(args.checkpoint)
    corpus = Path(args.corpus)
    src_lines = read_lines(corpus / f"{args.split}.c.{args.suffix}")
    ids = read_split_ids(corpus, args.split)
    if len(ids) != len(src_lines):
        raise ConfigError(
            f"{len(ids)} manifest ids vs {len(src_lines)} source lines"
        )
    k = args.k or config.beam_k
    hyps = predict_lines(model, vocab, src_lines, k=k)
    write_predictions(ids, hyps, args.out)
    print(f"wrote {len(ids)} prediction sets to {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="neurocc-trainer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train on a built corpus")
    p.add_argument("--corpus", required=True, help="corpus directory")
    p.add_argument("--out", required=True, help="checkpoint directory")
    p.add_argument("--config", help="config JSON (may name a preset)")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--epochs", type=int)
    p.add_argument("--suffix", default="tok",
                   help="corpus file suffix (tok or a BPE-encoded variant)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="emit beam hypotheses as JSONL")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--split", default="test")
    p.add_argument("--suffix", default="tok")
    p.add_argument("--k", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CheckpointMismatch, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
