"""Operator command line: init, ingest, review-serve, export, load, stats,
normalize."""

from __future__ import annotations

import argparse
import os
import sys
from collections import Counter
from pathlib import Path

from . import store as store_mod
from .errors import TermforgeError
from .ingest import SourceAdapterConfig, parse_source, scope_filter
from .integrate import Integrator
from .matching import DEFAULT_THETA, Matcher, TermIndex
from .model import SourceRegistryEntry, Vocabulary
from .normalize import DEFAULT_STOP_WORDS, load_stop_words, normalize
from .semnet import Hierarchy

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

ENV_STORE = "TERMFORGE_STORE"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="termforge",
        description="Controlled-vocabulary integration engine",
    )
    parser.add_argument(
        "--store",
        default=os.environ.get(ENV_STORE),
        help=f"store directory (default: ${ENV_STORE})",
    )
    parser.add_argument("--theta", type=float, default=DEFAULT_THETA)
    parser.add_argument("--stopwords", help="stop-word override file")
    sub = parser.add_subparsers(dest="command")

    sub.add_parser("init", help="create an empty store with the top-level types")

    p_ingest = sub.add_parser("ingest", help="parse, filter and integrate a source file")
    p_ingest.add_argument("config")
    p_ingest.add_argument("file")
    p_ingest.add_argument("--run-log", help="write a JSON-lines run log here")

    p_serve = sub.add_parser("review-serve", help="start the review API + UI")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--ui-dir", help="built UI bundle to serve at /")

    p_export = sub.add_parser("export", help="write a release directory")
    p_export.add_argument("out_dir")
    p_export.add_argument("--label", required=True)

    p_load = sub.add_parser("load", help="load a release into the store")
    p_load.add_argument("release_dir")

    sub.add_parser("stats", help="print the coverage report")

    p_norm = sub.add_parser("normalize", help="print the normalized form of a string")
    p_norm.add_argument("text")

    return parser


def _stop_words(args) -> frozenset[str]:
    if args.stopwords:
        return load_stop_words(args.stopwords)
    return DEFAULT_STOP_WORDS


def _require_store(args) -> Path:
    if not args.store:
        raise TermforgeError("no store directory (use --store or $TERMFORGE_STORE)")
    return Path(args.store)


def _open(args):
    store_dir = _require_store(args)
    vocab, hierarchy, manifest, state = store_mod.load_store(store_dir)
    index = TermIndex.rebuild(vocab, _stop_words(args))
    matcher = Matcher(vocab, index, theta=args.theta)
    integrator = Integrator(vocab, matcher, hierarchy)
    store_mod.restore_integrator_state(integrator, state)
    return store_dir, vocab, hierarchy, manifest, integrator


def _save(store_dir, vocab, hierarchy, integrator, manifest) -> None:
    store_mod.save_store(
        store_dir,
        vocab,
        hierarchy,
        integrator,
        label=manifest.get("label", "working"),
        timestamp=manifest.get("timestamp"),
    )


def cmd_init(args) -> int:
    store_dir = _require_store(args)
    store_dir.mkdir(parents=True, exist_ok=True)
    if (store_dir / store_mod.MANIFEST_NAME).exists():
        raise TermforgeError(f"store already initialized at {store_dir}")
    vocab = Vocabulary()
    hierarchy = Hierarchy()
    hierarchy.init_top_level(vocab.counters)
    with store_mod.StoreLock(store_dir):
        store_mod.save_store(store_dir, vocab, hierarchy)
    print(f"initialized store at {store_dir}")
    return EXIT_OK


def cmd_ingest(args) -> int:
    config = SourceAdapterConfig.from_file(args.config)
    store_dir = _require_store(args)
    with store_mod.StoreLock(store_dir):
        _, vocab, hierarchy, manifest, integrator = _open(args)
        if config.source_abbr not in vocab.registry:
            rank = config.precedence_rank
            if rank <= 0:
                used = {
                    e.precedence_rank for e in vocab.registry.entries.values()
                }
                rank = max(used, default=0) + 1
            vocab.registry.register(
                SourceRegistryEntry(
                    config.source_abbr, config.version, rank, dict(config.tty_ranks)
                )
            )
        concepts, report = parse_source(args.file, config)
        outcomes = Counter()
        duplicates = 0
        dropped = 0
        for sc in concepts:
            decision = scope_filter(sc, config)
            if decision.concept is None:
                dropped += 1
                continue
            outcome = integrator.integrate(decision.concept)
            outcomes[outcome.kind.value] += 1
            duplicates += outcome.duplicates
        _save(store_dir, vocab, hierarchy, integrator, manifest)
        if args.run_log:
            integrator.write_run_log(args.run_log)
    print(f"rows: {report.total_rows}  skipped: {report.skipped_rows}")
    print(f"source concepts: {len(concepts)}  dropped by scope: {dropped}")
    for kind in ("merged_into", "new_concept", "pending_review"):
        print(f"{kind}: {outcomes.get(kind, 0)}")
    print(f"duplicate atoms: {duplicates}")
    return EXIT_OK


def cmd_review_serve(args) -> int:
    import uvicorn

    from .service import create_app

    store_dir = _require_store(args)
    lock = store_mod.StoreLock(store_dir)
    lock.__enter__()
    try:
        _, vocab, hierarchy, manifest, integrator = _open(args)

        def persist() -> None:
            _save(store_dir, vocab, hierarchy, integrator, manifest)

        app = create_app(integrator, on_mutation=persist, static_dir=args.ui_dir)
        uvicorn.run(app, host="127.0.0.1", port=args.port)
    finally:
        lock.__exit__(None, None, None)
    return EXIT_OK


def cmd_export(args) -> int:
    _, vocab, hierarchy, manifest, _integrator = _open(args)
    out_manifest = store_mod.export_release(
        vocab,
        hierarchy,
        args.label,
        args.out_dir,
        timestamp=manifest.get("timestamp"),
    )
    total = sum(t["rows"] for t in out_manifest["tables"].values())
    print(f"exported release {args.label} to {args.out_dir} ({total} rows)")
    return EXIT_OK


def cmd_load(args) -> int:
    store_dir = _require_store(args)
    vocab, hierarchy, manifest = store_mod.load_release(args.release_dir)
    store_dir.mkdir(parents=True, exist_ok=True)
    with store_mod.StoreLock(store_dir):
        store_mod.save_store(
            store_dir,
            vocab,
            hierarchy,
            label=manifest.get("label", "working"),
            timestamp=manifest.get("timestamp"),
        )
    print(f"loaded release {manifest.get('label')} into {store_dir}")
    return EXIT_OK


def cmd_stats(args) -> int:
    _, vocab, hierarchy, _manifest, integrator = _open(args)
    rows, untyped = hierarchy.coverage_report(vocab)
    width = max(len(label) for label, _ in rows)
    for label, count in rows:
        print(f"{label:<{width}}  {count}")
    print(f"{'(untyped)':<{width}}  {untyped}")
    print(
        f"pending: open={len(integrator.open_pendings())} "
        f"resolved={integrator.resolved_count()}"
    )
    return EXIT_OK


def cmd_normalize(args) -> int:
    print(normalize(args.text, _stop_words(args)).joined)
    return EXIT_OK


_COMMANDS = {
    "init": cmd_init,
    "ingest": cmd_ingest,
    "review-serve": cmd_review_serve,
    "export": cmd_export,
    "load": cmd_load,
    "stats": cmd_stats,
    "normalize": cmd_normalize,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except TermforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
