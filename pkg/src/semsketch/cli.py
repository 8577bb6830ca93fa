"""Command-line entry points.

Subcommands: embed, ingest, query, serve, bench, report. Every command is a
thin composition of library calls; exit code 0 on success, 1 on validation
errors, 2 on I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from collections import defaultdict
from pathlib import Path

import numpy as np

from .embedding import embed_concepts, load_embedding_table, persist_embedding_table
from .encoder import BASELINE_BITS, EncoderConfig, encode_grid, storage_report
from .label_map import aggregate, parse_label_map
from .store import BenchmarkReport, VectorStore
from .synth import generate_synthetic_store, synthetic_queries
from .tsne import TsneParams
from .vocab import load_vocabulary, load_word_vectors

DEFAULT_REPORT_CONFIGS = (
    EncoderConfig(n=32, d=2, bits=32),
    EncoderConfig(n=16, d=3, bits=32),
    EncoderConfig(n=8, d=2, bits=8),
)
_RATIO_FOOTNOTE = (
    "* 1024 bits / 245760 = 0.417%; the often-quoted 4.2% for this"
    " configuration is inconsistent with the bits/baseline formula."
)


class _Parser(argparse.ArgumentParser):
    """argparse that exits with code 1 on usage errors, per the CLI contract."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semsketch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    embed = sub.add_parser("embed", help="build the concept embedding table")
    embed.add_argument("--vocab", required=True, help="vocabulary file (id\\tlabel\\tsource)")
    embed.add_argument("--vectors", required=True, help="text-format word-vector file")
    embed.add_argument("--out", required=True, help="output embedding table path")
    embed.add_argument("--d", type=int, default=2, choices=(2, 3))
    embed.add_argument("--perplexity", type=float, default=30.0)
    embed.add_argument("--iterations", type=int, default=1000)
    embed.add_argument("--learning-rate", type=float, default=200.0)
    embed.add_argument("--seed", type=int, default=0)
    embed.set_defaults(func=cmd_embed)

    ingest = sub.add_parser("ingest", help="aggregate and store a directory of label maps")
    ingest.add_argument("--maps", required=True, help="directory of <segment_id>[.<source>].slm files")
    ingest.add_argument("--table", required=True, help="embedding table path")
    ingest.add_argument("--store", required=True, help="vector store path (created if absent)")
    ingest.add_argument("--n", type=int, default=32)
    ingest.add_argument("--bits", type=int, default=32, choices=(8, 16, 32))
    ingest.set_defaults(func=cmd_ingest)

    query = sub.add_parser("query", help="rank stored segments against a sketch file")
    query.add_argument("--store", required=True)
    query.add_argument("--table", required=True)
    query.add_argument("--sketch", required=True, help="SLM1 label map used as the query sketch")
    query.add_argument("--k", type=int, default=10)
    query.add_argument("--threads", type=int, default=1)
    query.add_argument("--csv", action="store_true")
    query.set_defaults(func=cmd_query)

    serve = sub.add_parser("serve", help="run the HTTP query service")
    serve.add_argument("--store", required=True)
    serve.add_argument("--table", required=True)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)

    bench = sub.add_parser("bench", help="time full linear scans")
    bench.add_argument("--store", required=True)
    bench.add_argument("--synthetic", type=int, default=0, metavar="COUNT",
                       help="generate a synthetic store of COUNT vectors at --store first")
    bench.add_argument("--m", type=int, default=64, help="synthetic concept count")
    bench.add_argument("--n", type=int, default=32)
    bench.add_argument("--d", type=int, default=2, choices=(2, 3))
    bench.add_argument("--bits", type=int, default=32, choices=(8, 16, 32))
    bench.add_argument("--queries", type=int, default=10)
    bench.add_argument("--repetitions", type=int, default=3)
    bench.add_argument("--k", type=int, default=10)
    bench.add_argument("--threads", type=int, default=1)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--csv", action="store_true")
    bench.set_defaults(func=cmd_bench)

    report = sub.add_parser("report", help="storage footprint vs the one-hot baseline")
    report.add_argument("--config", action="append", default=[], metavar="N,D,BITS",
                        help="extra configuration row (repeatable)")
    report.add_argument("--baseline-bits", type=int, default=BASELINE_BITS)
    report.add_argument("--csv", action="store_true")
    report.set_defaults(func=cmd_report)

    return parser


def cmd_embed(args: argparse.Namespace) -> int:
    vocab = load_vocabulary(args.vocab)
    vectors = load_word_vectors(args.vectors, vocab)
    schedule = min(250, args.iterations)  # keep schedule knobs within the run length
    params = TsneParams(
        perplexity=args.perplexity,
        iterations=args.iterations,
        learning_rate=args.learning_rate,
        early_exaggeration_iters=schedule,
        momentum_switch_iter=schedule,
        seed=args.seed,
    )
    table, final_kl = embed_concepts(vocab, vectors, args.d, params)
    persist_embedding_table(table, args.out)
    print(f"concepts={len(table)} d={table.d} final_kl={final_kl:.6f}")
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    table = load_embedding_table(args.table)
    config = EncoderConfig(n=args.n, d=table.d, bits=args.bits)
    store_path = Path(args.store)
    if store_path.exists():
        store = VectorStore.open(store_path, expected=config)
    else:
        store = VectorStore.create(store_path, config, scale=table.scale)

    map_dir = Path(args.maps)
    if not map_dir.is_dir():
        raise NotADirectoryError(f"not a directory: {map_dir}")
    groups: dict[int, list[Path]] = defaultdict(list)
    skipped = 0
    for path in sorted(map_dir.glob("*.slm")):
        head = path.name.split(".", 1)[0]
        try:
            segment_id = int(head)
        except ValueError:
            print(f"skip {path.name}: filename does not start with a segment id", file=sys.stderr)
            skipped += 1
            continue
        groups[segment_id].append(path)

    ingested = 0
    with store:
        for segment_id in sorted(groups):
            try:
                maps = [parse_label_map(p.read_bytes(), vocab_size=len(table)) for p in groups[segment_id]]
                grid = aggregate(maps, config.n)
                store.append(segment_id, encode_grid(grid, table))
                ingested += 1
            except ValueError as exc:  # parse failure or duplicate id: isolate, keep going
                print(f"skip segment {segment_id}: {exc}", file=sys.stderr)
                skipped += 1
        print(f"ingested={ingested} skipped={skipped} store_count={len(store)}")
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    table = load_embedding_table(args.table)
    with VectorStore.open(args.store) as store:
        sketch = parse_label_map(Path(args.sketch).read_bytes(), vocab_size=len(table))
        grid = aggregate([sketch], store.config.n)
        results = store.knn(encode_grid(grid, table), args.k, threads=args.threads)
    if args.csv:
        print("rank,segment_id,distance")
        for r in results:
            print(f"{r.rank},{r.segment_id},{r.distance:.9g}")
    else:
        print(f"{'rank':>4}  {'segment':>12}  distance")
        for r in results:
            print(f"{r.rank:>4}  {r.segment_id:>12}  {r.distance:.6f}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    table = load_embedding_table(args.table)
    store = VectorStore.open(args.store)
    app = create_app(table, store)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    if args.synthetic:
        config = EncoderConfig(n=args.n, d=args.d, bits=args.bits)
        store = generate_synthetic_store(args.store, args.synthetic, config, m=args.m, seed=args.seed)
    else:
        store = VectorStore.open(args.store)
    with store:
        queries = synthetic_queries(store.config, args.queries, args.seed, m=args.m)
        report = store.scan_benchmark(queries, args.repetitions, k=args.k, threads=args.threads)
    _print_bench(report, csv=args.csv)
    return 0


def _print_bench(report: BenchmarkReport, csv: bool) -> None:
    if csv:
        print("vectors,dims,queries,repetitions,threads,mean_ms,p50_ms,p95_ms,"
              "vector_dims_per_ms,extrapolated_ms")
        print(f"{report.vector_count},{report.dims},{report.query_count},{report.repetitions},"
              f"{report.threads},{report.mean_ms:.3f},{report.p50_ms:.3f},{report.p95_ms:.3f},"
              f"{report.vector_dims_per_ms:.1f},{report.extrapolated_ms:.1f}")
    else:
        print(f"vectors={report.vector_count} dims={report.dims} queries={report.query_count} "
              f"repetitions={report.repetitions} threads={report.threads}")
        print(f"scan mean={report.mean_ms:.2f}ms p50={report.p50_ms:.2f}ms p95={report.p95_ms:.2f}ms")
        print(f"throughput={report.vector_dims_per_ms:.0f} vector-dims/ms")
        print(f"extrapolated_{1046235}={report.extrapolated_ms:.1f}ms")
        print(f"machine={report.machine}")


def cmd_report(args: argparse.Namespace) -> int:
    configs = list(DEFAULT_REPORT_CONFIGS)
    for raw in args.config:
        parts = raw.split(",")
        if len(parts) != 3:
            raise ValueError(f"--config expects N,D,BITS, got {raw!r}")
        configs.append(EncoderConfig(n=int(parts[0]), d=int(parts[1]), bits=int(parts[2])))

    rows = []
    for config in configs:
        bits, ratio = storage_report(config, args.baseline_bits)
        rows.append((config, bits, ratio))

    flagged = EncoderConfig(n=8, d=2, bits=8)
    if args.csv:
        print("n,d,bits_per_dim,vector_bits,ratio")
        for config, bits, ratio in rows:
            print(f"{config.n},{config.d},{config.bits},{bits},{ratio!r}")
    else:
        print(f"baseline={args.baseline_bits} bits")
        print(f"{'n':>4} {'d':>3} {'bits/dim':>8} {'vector bits':>12} {'ratio':>9}")
        for config, bits, ratio in rows:
            mark = " *" if config == flagged else ""
            print(f"{config.n:>4} {config.d:>3} {config.bits:>8} {bits:>12} {100 * ratio:>8.3f}%{mark}")
        if any(config == flagged for config, _, _ in rows):
            print(_RATIO_FOOTNOTE)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
