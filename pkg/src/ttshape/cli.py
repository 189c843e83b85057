"""Command line interface.

Subcommands:
    compress    search (or accept) a shape, decompose, write an archive
    decompress  restore the tensor or image from an archive
    eval        score one explicit shape on one input
    search      run the shape search alone and print the winner
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import tensor
from .archive import read_archive, write_archive
from .errors import InfeasibleShape, TTShapeError, UnsupportedFormat
from .ga import GAConfig, default_upper, run_search
from .images import load_image, save_image
from .tt import (
    compression_ratio,
    evaluate_shape,
    relative_error,
    tt_reconstruct,
    tt_svd,
)


def _parse_shape(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"shape must be comma-separated integers, got {text!r}"
        )
    if not dims or any(n < 1 for n in dims):
        raise argparse.ArgumentTypeError(f"shape dimensions must be >= 1: {text!r}")
    return dims


def _add_input_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="PNG, binary PPM, or .npy tensor")
    parser.add_argument(
        "--resize-longest",
        type=int,
        metavar="N",
        help="resize an image so its longest side has N pixels (nearest neighbor)",
    )


def _add_search_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--order", type=int, default=3, help="genome length (default 3)")
    parser.add_argument("--min", type=int, default=2, help="smallest dimension size (default 2)")
    parser.add_argument(
        "--max",
        type=int,
        default=None,
        help="largest dimension size (default: element count, capped at 4096)",
    )
    parser.add_argument("--gens", type=int, default=50, help="generations (default 50)")
    parser.add_argument("--pop", type=int, default=100, help="population size (default 100)")
    parser.add_argument("--parents", type=int, default=30, help="parent set size (default 30)")
    parser.add_argument(
        "--mutation-rate",
        type=float,
        default=None,
        help="per-gene mutation probability (default 1/order)",
    )
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")


def _add_report_flags(parser: argparse.ArgumentParser, derived: bool) -> None:
    hint = " (default: derived from --out)" if derived else ""
    parser.add_argument("--report", help=f"JSON run summary path{hint}")
    parser.add_argument("--history", help=f"per-generation CSV path{hint}")
    parser.add_argument("--plot", help=f"convergence figure path{hint}")


def _load_input(args) -> tuple[np.ndarray, dict]:
    path = Path(args.input)
    resize = getattr(args, "resize_longest", None)
    if path.suffix.lower() == ".npy":
        if resize is not None:
            raise UnsupportedFormat("--resize-longest applies to image inputs only")
        try:
            raw = np.load(path)
        except OSError as exc:
            raise UnsupportedFormat(f"{path}: not a readable .npy file ({exc})") from exc
        except ValueError as exc:
            raise UnsupportedFormat(f"{path}: {exc}") from exc
        arr = tensor.as_tensor(raw)
        source = "npy"
    else:
        arr = load_image(path, resize_longest=resize)
        source = "image"
    descriptor = {
        "path": str(path),
        "source": source,
        "shape": [int(n) for n in arr.shape],
        "cardinality": int(arr.size),
        "resize_longest": resize,
    }
    return arr, descriptor


def _config_from_args(args, data_cardinality: int) -> GAConfig:
    upper = args.max if args.max is not None else default_upper(data_cardinality)
    return GAConfig(
        generations=args.gens,
        population_size=args.pop,
        parent_size=args.parents,
        order=args.order,
        lower=args.min,
        upper=upper,
        error_bound=args.eps,
        mutation_rate=args.mutation_rate,
        seed=args.seed,
    )


def _final_metrics(arr: np.ndarray, shape, error_bound: float):
    """Decompose once more at the chosen shape; the archive and the report
    must describe the same cores."""
    padded = tensor.pad_reshape(arr, shape)
    decomposition = tt_svd(padded, error_bound)
    approx = tensor.unpad(tt_reconstruct(decomposition.cores), arr.shape)
    compression = compression_ratio(decomposition.param_count, arr.size)
    error = relative_error(arr, approx)
    return decomposition, compression, error


def _print_summary(lines: dict) -> None:
    for key, value in lines.items():
        print(f"{key}: {value}")


def _cmd_compress(args) -> int:
    from . import report as reporting

    arr, descriptor = _load_input(args)
    history = None
    config = None
    elapsed = None
    if args.shape is not None:
        if tensor.cardinality(args.shape) < arr.size:
            raise InfeasibleShape(
                f"shape {args.shape} holds {tensor.cardinality(args.shape)} "
                f"elements, input has {arr.size}"
            )
        best_shape = args.shape
        mode = "fixed"
    else:
        config = _config_from_args(args, arr.size)
        started = time.perf_counter()
        best, history = run_search(arr, config)
        elapsed = time.perf_counter() - started
        best_shape = best.genome
        mode = "search"

    decomposition, compression, error = _final_metrics(arr, best_shape, args.eps)
    out = Path(args.out)
    size = write_archive(decomposition.cores, arr.shape, best_shape, args.eps, out)

    report_path = Path(args.report) if args.report else out.with_suffix(out.suffix + ".report.json")
    archive_info = {"path": str(out), "bytes": int(size)}
    report = reporting.build_report(
        descriptor,
        args.eps,
        mode,
        best_shape,
        compression,
        error,
        decomposition.cores.ranks,
        decomposition.param_count,
        config=config,
        history=history,
        archive=archive_info,
    )
    reporting.write_report(report, report_path)

    summary = {
        "shape": reporting.format_shape(best_shape),
        "compression_ratio": compression,
        "relative_error": error,
        "archive": f"{out} ({size} bytes)",
        "report": report_path,
    }
    if history is not None:
        history_path = Path(args.history) if args.history else out.with_suffix(out.suffix + ".history.csv")
        plot_path = Path(args.plot) if args.plot else out.with_suffix(out.suffix + ".convergence.png")
        reporting.write_history_csv(history, history_path)
        reporting.render_convergence(history, plot_path)
        summary["history"] = history_path
        summary["figure"] = plot_path
        summary["search_time_s"] = f"{elapsed:.3f}"
    _print_summary(summary)
    return 0


def _cmd_decompress(args) -> int:
    contents = read_archive(args.input)
    restored = tensor.unpad(tt_reconstruct(contents.cores), contents.original_shape)
    out = Path(args.out)
    suffix = out.suffix.lower()
    if suffix == ".npy":
        np.save(out, restored)
    elif suffix == ".png":
        save_image(restored, out)
    else:
        raise UnsupportedFormat(f"output must end in .npy or .png, got {out.name}")
    _print_summary(
        {
            "shape": "x".join(str(n) for n in contents.original_shape),
            "error_bound": contents.error_bound,
            "output": out,
        }
    )
    return 0


def _cmd_eval(args) -> int:
    arr, _ = _load_input(args)
    fitness = evaluate_shape(arr, args.shape, args.eps)
    payload = {
        "shape": "x".join(str(n) for n in args.shape),
        "compression_ratio": fitness.compression,
        "relative_error": fitness.error,
        "ranks": ",".join(str(r) for r in fitness.ranks),
        "param_count": fitness.param_count,
    }
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        _print_summary(payload)
    return 0


def _cmd_search(args) -> int:
    arr, descriptor = _load_input(args)
    config = _config_from_args(args, arr.size)
    started = time.perf_counter()
    best, history = run_search(arr, config)
    elapsed = time.perf_counter() - started
    summary = {
        "best_shape": "x".join(str(n) for n in best.genome),
        "compression_ratio": best.fitness.compression,
        "relative_error": best.fitness.error,
        "ranks": ",".join(str(r) for r in best.fitness.ranks),
        "evaluations": history.evaluations,
        "cache_hits": history.cache_hits,
        "search_time_s": f"{elapsed:.3f}",
    }
    if args.report or args.history or args.plot:
        from . import report as reporting

        if args.report:
            report = reporting.build_report(
                descriptor,
                args.eps,
                "search",
                best.genome,
                best.fitness.compression,
                best.fitness.error,
                best.fitness.ranks,
                best.fitness.param_count,
                config=config,
                history=history,
            )
            reporting.write_report(report, args.report)
            summary["report"] = args.report
        if args.history:
            reporting.write_history_csv(history, args.history)
            summary["history"] = args.history
        if args.plot:
            reporting.render_convergence(history, args.plot)
            summary["figure"] = args.plot
    _print_summary(summary)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttshape",
        description="Tensor-train compression with an evolutionary shape search.",
    )
    sub = parser.add_subparsers(dest="command")

    compress = sub.add_parser("compress", help="compress an input to an archive")
    _add_input_flags(compress)
    compress.add_argument("--eps", type=float, default=0.1, help="relative error bound (default 0.1)")
    compress.add_argument("--shape", type=_parse_shape, default=None,
                          help="skip the search and use this shape, e.g. 222,16,60")
    _add_search_flags(compress)
    compress.add_argument("--out", required=True, help="archive file to write")
    _add_report_flags(compress, derived=True)
    compress.set_defaults(handler=_cmd_compress)

    decompress = sub.add_parser("decompress", help="restore data from an archive")
    decompress.add_argument("--input", required=True, help="archive file")
    decompress.add_argument("--out", required=True, help=".png or .npy to write")
    decompress.set_defaults(handler=_cmd_decompress)

    evaluate = sub.add_parser("eval", help="score one shape on one input")
    _add_input_flags(evaluate)
    evaluate.add_argument("--eps", type=float, default=0.1, help="relative error bound (default 0.1)")
    evaluate.add_argument("--shape", type=_parse_shape, required=True,
                          help="shape to score, e.g. 214,320,3")
    evaluate.add_argument("--json", action="store_true", help="emit JSON instead of text")
    evaluate.set_defaults(handler=_cmd_eval)

    search = sub.add_parser("search", help="run the shape search and print the winner")
    _add_input_flags(search)
    search.add_argument("--eps", type=float, default=0.1, help="relative error bound (default 0.1)")
    _add_search_flags(search)
    _add_report_flags(search, derived=False)
    search.set_defaults(handler=_cmd_search)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "handler"):
        parser.print_help()
        return 2
    try:
        return args.handler(args)
    except TTShapeError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
