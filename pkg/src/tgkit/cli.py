"""Command-line pipeline: convert, sample, tokens, oracle, features, evaluate.

Data goes to files or stdout, logs to stderr. Output files are written to a
temp path and renamed, so failures never leave partial files behind. Seeds are
required wherever randomness is involved.

Exit codes: 1 internal error, 2 bad input/arguments, 3 graph too small to
sample.
"""

import argparse
import os
import sys
import time
from pathlib import Path

from . import tokenmeter
from .errors import SingleNodeGraph, TgkitError
from .features import compute_features, features_csv
from .formats import STANDARD_FORMATS, read_standard, write_standard
from .cetras import SampleConfig, sample
from .ingest import DEFAULT_NODE_CAP, ingest_raw, read_raw_csv
from .llm4tg import parse_llm4tg, serialize_llm4tg
from .oracle import answer_key

GRAPH_FORMATS = ("tg",) + STANDARD_FORMATS


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _write_atomic(path: str, text: str) -> None:
    tmp = f"{path}.tmp"
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(text: str, out_path) -> None:
    if out_path:
        _write_atomic(out_path, text)
    else:
        sys.stdout.write(text)


def _infer_format(path, given) -> str:
    if given:
        return given
    ext = Path(path).suffix.lstrip(".").lower()
    if ext in GRAPH_FORMATS + ("csv",):
        return ext
    raise TgkitError(f"cannot infer format of {path!r}; pass --from/--to")


def _load_graph(path, fmt, root=None, hop_bound=5, node_cap=DEFAULT_NODE_CAP):
    if fmt == "tg":
        return parse_llm4tg(Path(path).read_text(encoding="utf-8"))
    if fmt in STANDARD_FORMATS:
        return read_standard(path, fmt)
    if fmt == "csv":
        if not root:
            raise TgkitError("ingesting raw records needs --root <address>")
        return ingest_raw(read_raw_csv(path), root, hop_bound=hop_bound,
                          node_cap=node_cap)
    raise TgkitError(f"unknown input format {fmt!r}")


def _render_graph(g, fmt) -> str:
    if fmt == "tg":
        return serialize_llm4tg(g).text
    if fmt in STANDARD_FORMATS:
        return write_standard(g, fmt)
    raise TgkitError(f"unknown output format {fmt!r}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_convert(args) -> int:
    in_fmt = _infer_format(args.input, args.in_format)
    out_fmt = _infer_format(args.output, args.out_format)
    g = _load_graph(args.input, in_fmt, root=args.root,
                    hop_bound=args.hop_bound, node_cap=args.node_cap)
    text = _render_graph(g, out_fmt)
    _write_atomic(args.output, text)
    tokens = tokenmeter.count_tokens(text)
    print(f"nodes={len(g)} edges={len(g.edges)} tokens={tokens}")
    return 0


def cmd_sample(args) -> int:
    g = _load_graph(args.input, _infer_format(args.input, args.in_format))
    started = time.perf_counter()
    sampled = sample(g, SampleConfig(n_target=args.n_target, seed=args.seed,
                                     beta=args.beta))
    elapsed = time.perf_counter() - started
    _write_atomic(args.output, serialize_llm4tg(sampled).text)
    print(f"nodes={len(sampled)} elapsed_s={elapsed:.4f}")
    return 0


def cmd_tokens(args) -> int:
    budgets = [tokenmeter.budget_for(m) for m in args.models]
    reports = []
    for path in args.inputs:
        g = _load_graph(path, _infer_format(path, args.in_format))
        reports.append(tokenmeter.compare_formats(g, budgets))
        _log(f"tokens: {path}: nodes={reports[-1].node_count}")
    _emit(tokenmeter.report_csv(reports, budgets), args.out)
    if args.plot:
        from .plots import token_consumption_plot

        token_consumption_plot(reports, budgets, args.plot)
        _log(f"tokens: wrote figure {args.plot}")
    return 0


def cmd_oracle(args) -> int:
    g = _load_graph(args.input, _infer_format(args.input, args.in_format))
    _emit(answer_key(g).to_json() + "\n", args.out)
    return 0


def cmd_features(args) -> int:
    rows = []
    for path in args.inputs:
        fmt = _infer_format(path, args.in_format)
        records = read_raw_csv(args.records) if args.records else None
        g = _load_graph(path, fmt, root=args.root)
        rows.append((Path(path).stem, compute_features(g, records)))
    _emit(features_csv(rows), args.out)
    return 0


def cmd_evaluate(args) -> int:
    from .harness.runner import load_manifest, run_evaluation

    manifest = load_manifest(args.manifest)
    result = run_evaluation(manifest)
    _log(f"evaluate: wrote {result.written} records "
         f"(skipped {result.skipped}, failed {result.failed}) "
         f"-> {result.records_path}")
    if result.summary_path:
        _log(f"evaluate: summary -> {result.summary_path}")
    else:
        sys.stdout.write("\n".join(",".join(str(c) for c in row)
                                   for row in result.summary_rows) + "\n")
    if args.plot:
        from .plots import summary_plot

        summary_plot(result.summary_rows, args.plot,
                     title=f"level {manifest.level} summary")
        _log(f"evaluate: wrote figure {args.plot}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tgkit",
        description="Transaction-graph toolkit: LLM4TG conversion, CETraS "
                    "sampling, token budgeting, and LLM evaluation runs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert between graph formats")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--from", dest="in_format", choices=GRAPH_FORMATS + ("csv",))
    p.add_argument("--to", dest="out_format", choices=GRAPH_FORMATS)
    p.add_argument("--root", help="root address (csv ingestion only)")
    p.add_argument("--hop-bound", type=int, default=5)
    p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("sample", help="condense a graph with CETraS")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--n-target", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--from", dest="in_format", choices=GRAPH_FORMATS)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("tokens", help="token consumption report across formats")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--models", nargs="+",
                   default=["gpt-3.5", "deepseek", "gpt-4"])
    p.add_argument("--from", dest="in_format", choices=GRAPH_FORMATS)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--plot", help="render the consumption figure to this file")
    p.set_defaults(func=cmd_tokens)

    p = sub.add_parser("oracle", help="dump the answer key for a graph")
    p.add_argument("input")
    p.add_argument("--from", dest="in_format", choices=GRAPH_FORMATS)
    p.add_argument("--out", help="JSON path (default: stdout)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("features", help="dump feature vectors as CSV")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--from", dest="in_format", choices=GRAPH_FORMATS)
    p.add_argument("--records", help="raw-record CSV for temporal features")
    p.add_argument("--root", help="root address (csv ingestion only)")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("evaluate", help="run an evaluation manifest")
    p.add_argument("manifest")
    p.add_argument("--plot", help="render the summary figure to this file")
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SingleNodeGraph as exc:
        _log(f"tgkit {args.command}: {exc}")
        return 3
    except (TgkitError, OSError) as exc:
        _log(f"tgkit {args.command}: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
