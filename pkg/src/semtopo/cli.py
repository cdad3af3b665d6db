"""Command-line entry point.

Subcommands: ingest (corpus stats), run (full pipeline), validate <scene>,
summary <scene>. Exit codes: 0 ok, 1 config error, 2 input error,
3 internal invariant failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import pipeline, scene
from .errors import ConfigError, InputError, InvariantError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="log stage timing"
    )


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    _add_common_flags(parser)
    parser.add_argument("--config", required=True, help="pipeline config file (INI)")
    parser.add_argument("--text", help="override corpus text path")
    parser.add_argument("--embeddings", help="load sentence vectors from this file")
    parser.add_argument(
        "--fallback-embed",
        action="store_true",
        help="use the built-in deterministic embedder",
    )
    parser.add_argument("--sentiment", help="external sentiment label file")
    parser.add_argument("--lexicon", help="valence lexicon for the fallback scorer")
    parser.add_argument("--gazetteer", help="entity surface-form list")
    parser.add_argument("--annotations", help="CoNLL-style entity annotations")
    parser.add_argument("--seed", type=int, help="master seed for every stage")
    parser.add_argument("--out", help="scene output path")


def _apply_overrides(config: pipeline.PipelineConfig, args) -> None:
    if args.text:
        config.text = args.text
    if args.embeddings and args.fallback_embed:
        raise ConfigError("--embeddings and --fallback-embed are mutually exclusive")
    if args.embeddings:
        config.embedding_source = "file"
        config.embedding_path = args.embeddings
    if args.fallback_embed:
        config.embedding_source = "fallback"
        config.embedding_path = ""
    if args.sentiment:
        config.sentiment_path = args.sentiment
    if args.lexicon:
        config.lexicon_path = args.lexicon
    if args.gazetteer:
        config.gazetteer_path = args.gazetteer
    if args.annotations:
        config.annotations_path = args.annotations
    if args.seed is not None:
        config.seed = args.seed
    if args.out:
        config.out_path = args.out


def _cmd_ingest(args) -> int:
    config = pipeline.load_config(args.config)
    _apply_overrides(config, args)
    stats = pipeline.ingest_stats(config)
    print(json.dumps(stats, sort_keys=True, indent=1))
    return EXIT_OK


def _cmd_run(args) -> int:
    config = pipeline.load_config(args.config)
    _apply_overrides(config, args)
    document = pipeline.run_pipeline(config)
    data = scene.serialize(document)
    out = Path(config.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(data)
    print(f"wrote {out} ({len(data)} bytes)")
    print(json.dumps(scene.summarize(document), sort_keys=True, indent=1))
    return EXIT_OK


def _read_scene(path: str) -> scene.SceneDocument:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"scene file not found: {p}")
    return scene.parse(p.read_bytes())


def _cmd_validate(args) -> int:
    document = _read_scene(args.scene)
    print(f"{args.scene}: valid ({len(document.semantic_layer)} semantic nodes)")
    return EXIT_OK


def _cmd_summary(args) -> int:
    document = _read_scene(args.scene)
    print(json.dumps(scene.summarize(document), sort_keys=True, indent=1))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semtopo",
        description="Turn a narrative corpus into a two-layer 3D semantic "
        "topology scene.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="segment the corpus and print stats")
    _add_run_flags(p_ingest)
    p_ingest.set_defaults(func=_cmd_ingest)

    p_run = sub.add_parser("run", help="run the full pipeline, write a scene file")
    _add_run_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_validate = sub.add_parser("validate", help="check a scene file end to end")
    _add_common_flags(p_validate)
    p_validate.add_argument("scene")
    p_validate.set_defaults(func=_cmd_validate)

    p_summary = sub.add_parser("summary", help="print a scene's layer statistics")
    _add_common_flags(p_summary)
    p_summary.add_argument("scene")
    p_summary.set_defaults(func=_cmd_summary)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - anything else is internal
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
