"""Command-line pipeline: generate -> distmat -> mds -> cluster -> plot, plus bench.

Exit codes: 0 success, 1 data or runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
import warnings
from pathlib import Path

from . import __version__
from .bench import DEFAULT_LENGTHS, DEFAULT_MEASURES, format_report, run_bench
from .clustering import average_linkage, pam_kmedoids, quality, write_partition
from .dataset import (
    DatasetError,
    EncodingScheme,
    encode,
    generate,
    labels_path_for,
    parse_uci,
    read_labels,
    write_labels,
    write_uci,
)
from .distances import (
    COMPRESSION_MEASURES,
    MEASURES,
    PHI_NAMES,
    DissimilarityMatrix,
    PairwiseError,
    dissimilarity_matrix,
    gcdd_matrices,
)
from .embedding import classical_mds, read_coordinates, write_coordinates
from .plot import scatter_svg

log = logging.getLogger("compdist")


class UsageError(Exception):
    pass


def _writable(path) -> Path:
    p = Path(path)
    parent = p.parent if str(p.parent) else Path(".")
    if p.is_dir() or not parent.is_dir() or not os.access(parent, os.W_OK):
        raise UsageError(f"cannot write to {path}")
    if p.exists() and not os.access(p, os.W_OK):
        raise UsageError(f"cannot write to {path}")
    return p


def _labels_for(input_path, labels_path):
    """Explicit labels file, else the sibling written by ``generate``, else None."""
    if labels_path:
        return read_labels(labels_path)
    sibling = labels_path_for(input_path)
    if sibling.exists():
        return read_labels(sibling)
    return None


def _load_series(input_path, labels_path=None):
    labels = _labels_for(input_path, labels_path)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        series = parse_uci(input_path, labels=labels, length=None)
    for w in caught:
        log.warning("%s", w.message)
    return series


def cmd_generate(args) -> int:
    if args.per_class < 1:
        raise UsageError("--per-class must be at least 1")
    if args.length < 8:
        raise UsageError("--length must be at least 8")
    out = _writable(args.out)
    labels_out = _writable(labels_path_for(out))
    series = generate(args.seed, args.per_class, args.length)
    write_uci(out, series)
    write_labels(labels_out, series)
    print(f"wrote {len(series)} series ({args.per_class} per class, length {args.length}) to {out}")
    print(f"wrote labels to {labels_out}")
    return 0


def cmd_distmat(args) -> int:
    measure = args.measure
    phis = args.phi or []
    if measure == "gcdd" and not phis:
        raise UsageError("--measure gcdd needs at least one --phi")
    if measure != "gcdd" and phis:
        raise UsageError("--phi applies only to --measure gcdd")
    out = _writable(args.out)
    series = _load_series(args.input, args.labels)
    scheme = EncodingScheme(args.encoding)

    t0 = time.perf_counter()
    if measure == "gcdd":
        objects = [encode(s, scheme) for s in series]
        results = gcdd_matrices(objects, phis, workers=args.workers)
        if len(results) == 1:
            targets = {out: next(iter(results.values()))}
        else:
            targets = {out.with_name(f"{out.stem}.{phi}{out.suffix}"): m for phi, m in results.items()}
    else:
        objects = [encode(s, scheme) for s in series] if measure in COMPRESSION_MEASURES else [s.values for s in series]
        matrix = dissimilarity_matrix(
            objects, measure, workers=args.workers, max_lag=args.max_lag, cort_k=args.cort_k
        )
        targets = {out: matrix}
    log.info("%s matrix for %d objects in %.3f s", measure, len(series), time.perf_counter() - t0)
    for path, matrix in targets.items():
        _writable(path)
        matrix.to_csv(path)
        print(f"wrote {matrix.size}x{matrix.size} {matrix.measure} matrix to {path}")
    return 0


def _read_matrix(path) -> DissimilarityMatrix:
    matrix = DissimilarityMatrix.from_csv(path)
    if not matrix.is_symmetric():
        raise DatasetError(f"{path}: matrix is not symmetric")
    return matrix


def cmd_mds(args) -> int:
    out = _writable(args.out)
    matrix = _read_matrix(args.input)
    if not 1 <= args.dims <= matrix.size - 1:
        raise UsageError(f"--dims must lie in [1, {matrix.size - 1}] for a {matrix.size}-object matrix")
    labels = read_labels(args.labels) if args.labels else None
    if labels is not None and len(labels) != matrix.size:
        raise DatasetError(f"{len(labels)} labels for a {matrix.size}-object matrix")
    result = classical_mds(matrix, args.dims)
    write_coordinates(out, result, labels)
    print(f"stress={result.stress:.6g}")
    print(f"negative_eigenvalues={result.n_negative} clipped_dimensions={result.n_clipped}")
    print(f"wrote {matrix.size}x{args.dims} coordinates to {out}")
    return 0


def cmd_cluster(args) -> int:
    if args.k < 2:
        raise UsageError("--k must be at least 2")
    out = _writable(args.out)
    report_path = _writable(args.report or out.with_name(out.stem + ".quality.json"))
    matrix = _read_matrix(args.input)
    labels = read_labels(args.labels)
    if len(labels) != matrix.size:
        raise DatasetError(f"{len(labels)} labels for a {matrix.size}-object matrix")
    if args.k > matrix.size:
        raise UsageError(f"--k must not exceed the number of objects ({matrix.size})")
    method = pam_kmedoids if args.method == "pam" else average_linkage
    partition = method(matrix, args.k)
    report = quality(partition, labels, matrix)
    write_partition(out, partition)
    with open(report_path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(report.to_json(method=args.method, measure=matrix.measure))
    print(
        f"purity={report.purity:.4f} adjusted_rand={report.adjusted_rand:.4f} "
        f"mean_silhouette={report.mean_silhouette:.4f}"
    )
    print(f"wrote partition to {out} and report to {report_path}")
    return 0


def cmd_plot(args) -> int:
    out = _writable(args.out)
    indices, labels, coords = read_coordinates(args.input)
    if indices != list(range(len(indices))):
        raise DatasetError(f"{args.input}: indices must be 0..n-1 in order")
    if args.labels:
        labels = read_labels(args.labels)
        if len(labels) != len(indices):
            raise DatasetError(f"{len(labels)} labels for {len(indices)} points")
    svg = scatter_svg(coords, labels, title=args.title or Path(args.input).stem)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    print(f"wrote {len(indices)} points to {out}")
    return 0


def cmd_bench(args) -> int:
    out = _writable(args.out) if args.out else None
    try:
        lengths = [int(v) for v in args.lengths.split(",") if v.strip()]
    except ValueError:
        raise UsageError("--lengths must be comma-separated integers") from None
    if args.repeats < 1 or args.scaling_per_class < 1:
        raise UsageError("--repeats and --scaling-per-class must be at least 1")
    if args.input:
        series = _load_series(args.input, args.labels)
    else:
        series = generate(args.seed, args.per_class, 60)
    report = run_bench(
        series,
        measures=args.measure or DEFAULT_MEASURES,
        schemes=[EncodingScheme(mode) for mode in dict.fromkeys(args.bench_encoding or ("quantize8", "raw"))],
        repeats=args.repeats,
        lengths=lengths,
        scaling_per_class=args.scaling_per_class,
        seed=args.seed,
        workers=args.workers,
        max_lag=args.max_lag,
        cort_k=args.cort_k,
    )
    text = format_report(report)
    if out:
        out.write_text(text, encoding="ascii")
        print(f"wrote benchmark report to {out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compdist", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress progress logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, measure=False, encoding=False):
        if measure:
            p.add_argument("--max-lag", type=int, default=10, help="acf lags 1..N (default 10)")
            p.add_argument("--cort-k", type=float, default=2.0, help="cort damping constant (default 2)")
            p.add_argument("--workers", type=int, default=1, help="worker processes (default 1; 0 = all CPUs)")
        if encoding:
            p.add_argument(
                "--encoding", choices=("quantize8", "raw"), default="quantize8",
                help="series-to-bytes encoding (default quantize8)",
            )

    p = sub.add_parser("generate", help="write a seeded synthetic control-chart dataset")
    p.add_argument("--out", required=True, help="data file; labels go to <out>.labels.csv")
    p.add_argument("--seed", type=int, default=0, help="generator seed (default 0)")
    p.add_argument("--per-class", type=int, default=100, help="series per class (default 100)")
    p.add_argument("--length", type=int, default=60, help="points per series (default 60)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("distmat", help="pairwise dissimilarity matrix as CSV")
    p.add_argument("--input", required=True, help="UCI-format data file")
    p.add_argument("--out", required=True, help="matrix CSV")
    p.add_argument(
        "--measure", choices=MEASURES + ("gcdd",), default="gcdd-entropy",
        help="dissimilarity measure (default gcdd-entropy)",
    )
    p.add_argument("--phi", action="append", choices=PHI_NAMES, help="functional for --measure gcdd (repeatable)")
    p.add_argument("--labels", help="labels CSV (default: <input>.labels.csv if present)")
    common(p, measure=True, encoding=True)
    p.set_defaults(func=cmd_distmat)

    p = sub.add_parser("mds", help="classical MDS of a matrix CSV")
    p.add_argument("--input", required=True, help="matrix CSV")
    p.add_argument("--out", required=True, help="coordinates CSV")
    p.add_argument("--dims", type=int, default=2, help="embedding dimension (default 2)")
    p.add_argument("--labels", help="labels CSV to copy into the label column")
    p.set_defaults(func=cmd_mds)

    p = sub.add_parser("cluster", help="partition a matrix and score it against labels")
    p.add_argument("--input", required=True, help="matrix CSV")
    p.add_argument("--labels", required=True, help="labels CSV")
    p.add_argument("--out", required=True, help="partition CSV")
    p.add_argument("--report", help="quality report (default: <out stem>.quality.json)")
    p.add_argument("--k", type=int, default=6, help="number of clusters (default 6)")
    p.add_argument("--method", choices=("pam", "average"), default="pam", help="clustering method (default pam)")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("plot", help="SVG scatter plot of coordinates")
    p.add_argument("--input", required=True, help="coordinates CSV")
    p.add_argument("--out", required=True, help="SVG file")
    p.add_argument("--labels", help="labels CSV (default: the label column)")
    p.add_argument("--title", help="plot title (default: input file name without suffix)")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("bench", help="time full matrices per measure and series length")
    p.add_argument("--input", help="data file (default: generate with --seed/--per-class)")
    p.add_argument("--labels", help="labels CSV (default: <input>.labels.csv if present)")
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument(
        "--measure", action="append", choices=MEASURES,
        help="measure to time (repeatable; default " + ", ".join(DEFAULT_MEASURES) + ")",
    )
    p.add_argument("--seed", type=int, default=0, help="generator seed (default 0)")
    p.add_argument("--per-class", type=int, default=100, help="series per class when generating (default 100)")
    p.add_argument("--repeats", type=int, default=5, help="timed runs per matrix (default 5)")
    p.add_argument(
        "--lengths", default=",".join(map(str, DEFAULT_LENGTHS)),
        help="series lengths for the scaling table (default " + ",".join(map(str, DEFAULT_LENGTHS)) + ")",
    )
    p.add_argument("--scaling-per-class", type=int, default=10, help="series per class in scaling datasets (default 10)")
    p.add_argument(
        "--encoding", dest="bench_encoding", action="append", choices=("quantize8", "raw"),
        help="encoding for the compression measures (repeatable; default both)",
    )
    common(p, measure=True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (DatasetError, PairwiseError, ValueError, OSError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
