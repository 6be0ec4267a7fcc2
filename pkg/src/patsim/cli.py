"""Command-line interface for scoring and evaluating patent similarity.

Subcommands: score, topk, eval, stats, embed-cache. Data goes to the
output path (or stdout); progress and error manifests go to stderr, so
piping the data stream stays clean. Exit codes are a stable contract:
0 success, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import IO, Sequence

from .corpus import PatentPair, corpus_stats, load_corpus, load_pairs
from .errors import PatsimError, PendingExpertError
from .evaluation import EvalSummary, evaluate
from .hybrid import SimilarityReport, all_pairs, score_corpus, topk_neighbors
from .providers import CacheProvider, RemoteProvider, StubProvider
from .ratings import adjudicate
from .semantic import EmbeddingProvider, embed_documents
from .veccache import write_cache

REMOTE_URL_ENV = "PATSIM_REMOTE_URL"

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE = 2


def log(message: str) -> None:
    print(message, file=sys.stderr)


def _add_provider_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--provider", choices=("stub", "cache", "remote"), default="stub")
    parser.add_argument("--seed", type=int, default=0, help="stub provider seed")
    parser.add_argument("--cache-path", help="vector cache file (required with --provider cache)")
    parser.add_argument("--remote-url", help=f"embedding service URL (or ${REMOTE_URL_ENV})")
    parser.add_argument("--pooled", action="store_true", help="ask the remote service for pre-pooled vectors")
    parser.add_argument("--jobs", type=int, default=1, help="parallel embedding requests")


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--strict", action="store_true", help="promote any data error to an abort")


def _add_output_options(parser: argparse.ArgumentParser, formats: Sequence[str]) -> None:
    parser.add_argument("--output", "-o", help="output path (default: stdout)")
    parser.add_argument("--format", choices=tuple(formats), default=formats[0])


def make_provider(args: argparse.Namespace, parser: argparse.ArgumentParser) -> EmbeddingProvider:
    if args.provider == "stub":
        return StubProvider(seed=args.seed)
    if args.provider == "cache":
        if not args.cache_path:
            parser.error("--cache-path is required with --provider cache")
        return CacheProvider(args.cache_path)
    url = args.remote_url or os.environ.get(REMOTE_URL_ENV)
    if not url:
        parser.error(f"--remote-url (or ${REMOTE_URL_ENV}) is required with --provider remote")
    return RemoteProvider(url, pooled=args.pooled)


def _open_output(path: str | None):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _report_dict(report: SimilarityReport) -> dict:
    return {
        "id_a": report.id_a,
        "id_b": report.id_b,
        "sd": round(report.sd, 6),
        "td": round(report.td, 6),
        "sdtd": round(report.sdtd, 6),
        "model_id": report.model_id,
    }


def write_reports(reports: Sequence[SimilarityReport], fmt: str, sink: IO[str]) -> None:
    if fmt == "csv":
        sink.write("id_a,id_b,sd,td,sdtd\n")
        for r in reports:
            sink.write(f"{r.id_a},{r.id_b},{r.sd:.6f},{r.td:.6f},{r.sdtd:.6f}\n")
    elif fmt == "jsonl":
        for r in reports:
            sink.write(json.dumps(_report_dict(r)) + "\n")
    else:
        json.dump([_report_dict(r) for r in reports], sink, indent=2)
        sink.write("\n")


def _load_corpus_logged(path: str, strict: bool):
    loaded = load_corpus(path, strict=strict)
    for issue in loaded.issues:
        log(f"corpus {path}: {issue}")
    return loaded


def _emit(reports, args, batch_issues) -> int:
    sink, owned = _open_output(args.output)
    try:
        write_reports(reports, args.format, sink)
    finally:
        if owned:
            sink.close()
    for issue in batch_issues:
        log(f"score: {issue}")
    return EXIT_DATA_ERROR if batch_issues else EXIT_OK


def cmd_score(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    provider = make_provider(args, parser)
    loaded = _load_corpus_logged(args.corpus, args.strict)
    issues = list(loaded.issues)
    if args.all_pairs:
        pairs: Sequence = all_pairs(loaded.corpus)
    else:
        pairs_loaded = load_pairs(args.pairs, loaded.corpus, strict=args.strict)
        for issue in pairs_loaded.issues:
            log(f"pairs {args.pairs}: {issue}")
        issues.extend(pairs_loaded.issues)
        pairs = pairs_loaded.pairs
    batch = score_corpus(loaded.corpus, provider, pairs, strict=args.strict, jobs=args.jobs)
    code = _emit(batch.reports, args, batch.issues)
    return EXIT_DATA_ERROR if (issues or code != EXIT_OK) else EXIT_OK


def cmd_topk(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    provider = make_provider(args, parser)
    loaded = _load_corpus_logged(args.corpus, args.strict)
    reports = topk_neighbors(loaded.corpus, provider, args.query, args.k, jobs=args.jobs)
    code = _emit(reports, args, [])
    return EXIT_DATA_ERROR if (loaded.issues or code != EXIT_OK) else EXIT_OK


def _format_eval_table(summaries: Sequence[EvalSummary]) -> str:
    lines = [f"{'score':<8} {'pearson':>10} {'spearman':>10}"]
    for s in summaries:
        lines.append(f"{s.field:<8} {s.pearson:>10.6f} {s.spearman:>10.6f}")
    return "\n".join(lines) + "\n"


def cmd_eval(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    provider = make_provider(args, parser)
    loaded = _load_corpus_logged(args.corpus, args.strict)
    pairs_loaded = load_pairs(args.pairs, loaded.corpus, strict=args.strict)
    for issue in pairs_loaded.issues:
        log(f"pairs {args.pairs}: {issue}")
    issues = list(loaded.issues) + list(pairs_loaded.issues)

    rated: list[PatentPair] = []
    unrated = 0
    for pair in pairs_loaded.pairs:
        if pair.rating is None:
            log(f"eval: pair ({pair.id_a}, {pair.id_b}) has no rating; skipped")
            unrated += 1
        else:
            rated.append(pair)

    adjudicated = []
    pending = []
    for pair in rated:
        try:
            adjudicated.append((pair, adjudicate(pair.rating, pair=f"({pair.id_a}, {pair.id_b})")))
        except PendingExpertError as exc:
            pending.append((pair, exc))
    if pending:
        for pair, exc in pending:
            log(f"eval: {exc}")
        if not args.skip_pending:
            log(f"eval: {len(pending)} pair(s) await a law-expert rating; rerun with --skip-pending to drop them")
            return EXIT_DATA_ERROR

    batch = score_corpus(loaded.corpus, provider, [p for p, _ in adjudicated], strict=args.strict, jobs=args.jobs)
    for issue in batch.issues:
        log(f"score: {issue}")
    failed = {issue.index for issue in batch.issues}
    truths = [score for i, (_, score) in enumerate(adjudicated) if i not in failed]

    summaries = [
        evaluate(batch.reports, truths, field, spearman_mode=args.spearman)
        for field in ("sd", "sdtd")
    ]

    sink, owned = _open_output(args.output)
    try:
        if args.format == "table":
            sink.write(_format_eval_table(summaries))
        elif args.format == "jsonl":
            for s in summaries:
                sink.write(json.dumps(s.to_json_dict()) + "\n")
        else:
            json.dump([s.to_json_dict() for s in summaries], sink, indent=2)
            sink.write("\n")
    finally:
        if owned:
            sink.close()
    return EXIT_DATA_ERROR if (issues or unrated or batch.issues) else EXIT_OK


def cmd_stats(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    loaded = _load_corpus_logged(args.corpus, args.strict)
    stats = corpus_stats(loaded.corpus)
    sink, owned = _open_output(args.output)
    try:
        if args.format == "json":
            payload = {
                "documents": stats.documents,
                "mean_keys": round(stats.mean_keys, 6),
                "sd_keys": round(stats.sd_keys, 6),
                "histogram": {str(k): v for k, v in stats.histogram.items()},
            }
            json.dump(payload, sink, indent=2)
            sink.write("\n")
        else:
            sink.write(f"documents: {stats.documents}\n")
            sink.write(f"ipc keys per patent: mean {stats.mean_keys:.6f} sd {stats.sd_keys:.6f}\n")
            sink.write("histogram (keys: patents):\n")
            for count, patents in stats.histogram.items():
                sink.write(f"  {count}: {patents}\n")
    finally:
        if owned:
            sink.close()
    return EXIT_DATA_ERROR if loaded.issues else EXIT_OK


def cmd_embed_cache(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    provider = make_provider(args, parser)
    loaded = _load_corpus_logged(args.corpus, args.strict)
    docs = list(loaded.corpus)
    matrices = embed_documents(provider, docs, jobs=args.jobs)
    count = write_cache(
        args.out_cache,
        provider.model_id,
        provider.dimension,
        ((m.patent_id, m.vectors) for m in matrices),
    )
    log(f"embed-cache: wrote {count} record(s) to {args.out_cache} (model {provider.model_id})")
    return EXIT_DATA_ERROR if loaded.issues else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score patent pairs")
    p_score.add_argument("--corpus", required=True)
    group = p_score.add_mutually_exclusive_group(required=True)
    group.add_argument("--pairs", help="pairs CSV")
    group.add_argument("--all-pairs", action="store_true", help="score every unordered pair")
    _add_provider_options(p_score)
    _add_output_options(p_score, ("csv", "jsonl", "json"))
    _add_common_options(p_score)
    p_score.set_defaults(func=cmd_score)

    p_topk = sub.add_parser("topk", help="rank nearest neighbors of one patent")
    p_topk.add_argument("--corpus", required=True)
    p_topk.add_argument("--query", required=True, help="query patent id")
    p_topk.add_argument("-k", type=int, default=10)
    _add_provider_options(p_topk)
    _add_output_options(p_topk, ("csv", "jsonl", "json"))
    _add_common_options(p_topk)
    p_topk.set_defaults(func=cmd_topk)

    p_eval = sub.add_parser("eval", help="correlate scores against expert ratings")
    p_eval.add_argument("--corpus", required=True)
    p_eval.add_argument("--pairs", required=True, help="rated pairs CSV")
    p_eval.add_argument("--spearman", choices=("standard", "paper-literal"), default="standard")
    p_eval.add_argument("--skip-pending", action="store_true", help="drop pairs awaiting a law-expert rating")
    _add_provider_options(p_eval)
    _add_output_options(p_eval, ("table", "json", "jsonl"))
    _add_common_options(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_stats = sub.add_parser("stats", help="corpus IPC-key statistics")
    p_stats.add_argument("--corpus", required=True)
    _add_output_options(p_stats, ("text", "json"))
    _add_common_options(p_stats)
    p_stats.set_defaults(func=cmd_stats)

    p_cache = sub.add_parser("embed-cache", help="precompute a vector cache file")
    p_cache.add_argument("--corpus", required=True)
    p_cache.add_argument("--out-cache", required=True, help="cache file to write")
    _add_provider_options(p_cache)
    _add_common_options(p_cache)
    p_cache.set_defaults(func=cmd_embed_cache)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except PatsimError as exc:
        log(f"error: {exc}")
        return EXIT_DATA_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
