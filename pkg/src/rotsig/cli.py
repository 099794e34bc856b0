"""Command line interface: ``rotsig {features,derive-table,classify,benchmark,selftest}``.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 internal invariant
violation.
"""

import argparse
import logging
import sys

import numpy as np

from . import benchmark
from .features import (
    dump_metadata,
    extract_features,
    features_to_csv,
    read_feature_csv,
    run_metadata,
)
from .formats import FORMATS, ParseError, dump_stroke_csv, dump_stroke_json, parse_strokes
from .invariants import default_table, derive_basis, dump_table
from .knn import knn_classify
from .tensor_algebra import ContractError

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("rotsig")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _even_order(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 2 or v % 2:
        raise argparse.ArgumentTypeError(f"order must be an even integer >= 2, got {v}")
    return v


def _read(path):
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_features(args):
    try:
        data = _read(args.input)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    dataset = parse_strokes(data, args.format)
    table = default_table(max(args.order, 2))
    feats, errors = extract_features(
        dataset, args.order, args.variant, args.normalize, args.rotate_seed, table, args.jobs
    )
    for e in errors:
        log.warning("sample %s (index %d) skipped: %s", e.sample_id, e.index, e.message)
    _write(args.output, features_to_csv(feats, table.labels(args.order, args.variant), dataset))
    if args.output not in (None, "-"):
        meta = run_metadata(args.order, args.variant, args.normalize, args.rotate_seed, table, len(dataset), errors)
        meta["input"] = args.input
        meta["format"] = args.format
        _write(args.output + ".json", dump_metadata(meta))
    return EXIT_OK


def cmd_derive_table(args):
    _write(args.output, dump_table(derive_basis(args.max_order)))
    return EXIT_OK


def _load_features(path):
    try:
        text = _read(path).decode("utf-8")
    except OSError as exc:
        raise UsageError(str(exc)) from None
    try:
        return read_feature_csv(text)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _label_array(labels):
    # integer labels keep numeric order for the smallest-label tie rule
    if all(isinstance(y, int) for y in labels):
        return np.array(labels, dtype=np.int64)
    return np.array([str(y) for y in labels], dtype=object)


def cmd_classify(args):
    _, train_y, train_X, train_names = _load_features(args.train)
    test_ids, test_y, test_X, test_names = _load_features(args.test)
    if train_names != test_names:
        raise UsageError("train and test feature columns differ")
    if any(y is None for y in train_y):
        raise UsageError("every training row needs a label")
    labelled = all(y is not None for y in test_y)
    train_y, truth = _label_array(train_y), _label_array(test_y) if labelled else None
    pred, err = knn_classify(train_X, train_y, test_X, args.k, args.standardize, truth)
    lines = ["id,label,predicted"]
    for sid, y, p in zip(test_ids, test_y, pred):
        lines.append(f"{sid},{'' if y is None else y},{p}")
    _write(args.output, "\n".join(lines) + "\n")
    if err is not None:
        wrong = int(round(err * len(pred)))
        print(f"error rate: {err:.4f} ({wrong}/{len(pred)})", file=sys.stderr)
    return EXIT_OK


def cmd_benchmark(args):
    ds = benchmark.make_benchmark(args.n_samples, args.seed, args.jitter, args.split)
    _write(args.output, dump_stroke_json(ds) if args.format == "stroke-json" else dump_stroke_csv(ds))
    return EXIT_OK


def cmd_selftest(args):
    from .selftest import run

    results = run(args.seed)
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_INTERNAL


def build_parser():
    p = _Parser(prog="rotsig", description="Rotation-invariant signature features for 2D curves.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("features", help="compute invariant features for a stroke dataset")
    f.add_argument("--input", required=True, help="dataset file, or - for stdin")
    f.add_argument("--format", choices=FORMATS, default="stroke-json")
    f.add_argument("--order", type=_even_order, default=4)
    f.add_argument("--variant", choices=("new", "full"), default="new")
    f.add_argument("--normalize", choices=("none", "tv", "bbox"), default="tv")
    f.add_argument("--rotate-seed", type=int, default=None)
    f.add_argument("--jobs", type=int, default=None, help="worker threads")
    f.add_argument("--output", default=None, help="CSV path (sidecar written to PATH.json)")
    f.set_defaults(func=cmd_features)

    d = sub.add_parser("derive-table", help="derive the invariant table in exact arithmetic")
    d.add_argument("--max-order", type=_even_order, default=6)
    d.add_argument("--output", default=None)
    d.set_defaults(func=cmd_derive_table)

    c = sub.add_parser("classify", help="k-NN on feature CSVs produced by 'features'")
    c.add_argument("--train", required=True)
    c.add_argument("--test", required=True)
    c.add_argument("--k", type=int, default=1)
    c.add_argument("--standardize", action="store_true")
    c.add_argument("--output", default=None)
    c.set_defaults(func=cmd_classify)

    b = sub.add_parser("benchmark", help="write the synthetic 8-class stroke benchmark")
    b.add_argument("--n-samples", type=int, default=400)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--jitter", type=float, default=0.03)
    b.add_argument("--split", default="train")
    b.add_argument("--format", choices=("stroke-json", "stroke-csv"), default="stroke-json")
    b.add_argument("--output", default=None)
    b.set_defaults(func=cmd_benchmark)

    s = sub.add_parser("selftest", help="run the built-in invariant/property checks")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, ContractError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
