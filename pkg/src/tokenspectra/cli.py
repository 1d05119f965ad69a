"""Command line frontend: ``tokenspectra {bands,filter,similarity,sweep}``.

Exit codes: 0 success, 1 usage, 2 data error, 3 numeric degeneracy.
Failures print exactly one line to stderr, prefixed ``error[<kind>]:``.
"""

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import embedding_io
from .bands import band_filter_from_spec, default_scheme
from .exceptions import (
    BandSpecError,
    DegenerateDirectionError,
    DegenerateVectorError,
    FormatError,
    ShapeError,
    SpectralError,
    UnsupportedLengthError,
)
from .reports import SimilarityReport, SweepReport
from .similarity import (
    DEFAULT_TAU,
    DirectionalLossInputs,
    class_token_weights,
    combination_scores,
    cosine_similarity,
    directional_loss,
    frequency_sweep,
    projected_similarity,
    threshold_patch_losses,
)
from .spectral_core import filter_sequence
from .validation import NORM_EPS, check_projection

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DEGENERATE = 0, 1, 2, 3
_KINDS = {EXIT_USAGE: "usage", EXIT_DATA: "data", EXIT_DEGENERATE: "degenerate"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _write_output(path, payload):
    """Write atomically so a failed run never leaves a partial file behind."""
    if isinstance(payload, str):
        payload = payload.encode("utf-8")
    if path is None or path == "-":
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tokenspectra-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def _map(func, items, jobs):
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]


def _load_projection(path):
    if path is None:
        return None, None
    try:
        return embedding_io.load_projection_file(path)
    except OSError as exc:
        raise FormatError(f"cannot read projection {path}: {exc.strerror}") from None


def _load_sequence(path):
    try:
        return embedding_io.load_sequence_file(path)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None


def _load_embedding(path):
    try:
        return embedding_io.load_embedding_file(path)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None


def cmd_bands(args):
    try:
        scheme = default_scheme(args.n)
    except UnsupportedLengthError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        rows = [{"band": name, "index": idx, "period": period} for name, idx, period in scheme.table()]
        _write_output(args.out, json.dumps({"n": args.n, "bands": rows}, indent=2, ensure_ascii=False) + "\n")
        return
    lines = ["band index period"] + [" ".join(row) for row in scheme.table()]
    _write_output(args.out, "\n".join(lines) + "\n")


def cmd_filter(args):
    if args.format == "csv":
        raise UsageError("filter writes sequences; --format must be json or omitted")
    if args.out is None and args.format != "json":
        raise UsageError("filter needs --out for binary output")
    X = _load_sequence(args.input)
    band_filter = band_filter_from_spec(args.bands, X.shape[0])
    Y = filter_sequence(X, band_filter)
    if args.format == "json":
        payload = embedding_io.write_sequence_json(Y, double=args.f64)
    else:
        payload = embedding_io.write_sequence(Y)
    _write_output(args.out, payload)


def _similarity_item(index, stylized_path, content_path, weights, style, source, P):
    item = {
        "item": index,
        "stylized": stylized_path,
        "content": content_path,
        "directional_loss": float("nan"),
        "cosine_style": float("nan"),
        "projected_style": float("nan"),
        "degenerate": False,
        "error": "",
    }
    errors = []
    try:
        stylized = _load_sequence(stylized_path)
        content = _load_sequence(content_path)
        if stylized.shape != content.shape or stylized.shape != (weights.shape[0], style.shape[0]):
            raise ShapeError(
                f"shapes {stylized.shape} / {content.shape} incompatible with "
                f"n={weights.shape[0]}, d={style.shape[0]}"
            )
    except SpectralError as exc:
        item["error"] = f"data: {exc}"
        return item

    z_stylized = weights @ stylized.astype(np.float64)
    z_content = weights @ content.astype(np.float64)
    try:
        item["directional_loss"] = directional_loss(
            DirectionalLossInputs(z_stylized, z_content, style, source)
        )
    except DegenerateVectorError as exc:
        item["degenerate"] = True
        errors.append(f"degenerate: {exc}")
    try:
        item["cosine_style"] = cosine_similarity(z_stylized, style)
        if P is not None:
            item["projected_style"] = projected_similarity(z_stylized, style, P)
    except DegenerateVectorError as exc:
        item["degenerate"] = True
        errors.append(f"degenerate: {exc}")
    item["error"] = "; ".join(errors)
    return item


def cmd_similarity(args):
    if len(args.stylized) != len(args.content):
        raise UsageError(
            f"{len(args.stylized)} stylized files but {len(args.content)} content files"
        )
    style = _load_embedding(args.style)
    source = _load_embedding(args.source)
    if style.shape != source.shape:
        raise ShapeError(f"style dim {style.shape[0]} != source dim {source.shape[0]}")
    style, source = style.astype(np.float64), source.astype(np.float64)
    if np.linalg.norm(style - source) <= NORM_EPS:
        # shared by every item, so not a per-item soft failure
        raise DegenerateDirectionError("style and source text embeddings coincide")
    P, proj_hash = _load_projection(args.proj)
    if P is not None:
        P = P.astype(np.float64)
        if P.shape[1] != style.shape[0]:
            raise ShapeError(f"projection in_dim {P.shape[1]} != embedding dim {style.shape[0]}")

    first = _load_sequence(args.stylized[0])
    n, d = first.shape
    band_filter = band_filter_from_spec(args.bands, n)
    weights = class_token_weights(band_filter)

    items = _map(
        lambda k: _similarity_item(k, args.stylized[k], args.content[k], weights, style, source, P),
        range(len(args.stylized)),
        args.jobs,
    )
    total, rejected = threshold_patch_losses([item["directional_loss"] for item in items], args.tau)
    for item, rej in zip(items, rejected):
        loss = item["directional_loss"]
        item["rejected"] = bool(rej)
        item["patch_contribution"] = float("nan") if np.isnan(loss) else (0.0 if rej else loss)

    metadata = {
        "bands": args.bands,
        "masked": list(band_filter.masked),
        "tau": args.tau,
        "n": n,
        "d": d,
        "representation": "filtered class token (token 0)",
        "projection": args.proj,
        "projection_sha256": proj_hash,
        "precision": "f64" if args.f64 else "f32-io",
    }
    report = SimilarityReport(items, metadata, total)
    _write_output(args.out, report.to_csv() if args.format == "csv" else report.to_json())


def cmd_sweep(args):
    text = _load_embedding(args.text).astype(np.float64)
    P, proj_hash = _load_projection(args.proj)
    sequences = _map(_load_sequence, args.sequences, args.jobs)
    sequences = [X.astype(np.float64) for X in sequences]
    probe = text
    if P is not None:
        P = check_projection(P, in_dim=text.shape[0])
        probe = P @ text
    if np.linalg.norm(probe) <= NORM_EPS:
        raise DegenerateVectorError("probe text embedding is zero (after projection)")
    rows = frequency_sweep(sequences, text, P, jobs=args.jobs)
    n, d = sequences[0].shape
    metadata = {
        "n": n,
        "d": d,
        "n_sequences": len(sequences),
        "scoring": "projected_cosine" if P is not None else "cosine",
        "representation": "filtered class token (token 0)",
        "projection": args.proj,
        "projection_sha256": proj_hash,
        "precision": "f64" if args.f64 else "f32-io",
    }
    ranking = combination_scores(sequences, text, P)
    report = SweepReport(n, rows, metadata, ranking)
    _write_output(args.out, report.to_csv() if args.format == "csv" else report.to_json())


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), help="report/output format")
    common.add_argument("--jobs", type=int, default=1, help="worker threads; output order is fixed")
    common.add_argument("--f64", action="store_true", help="emit double precision in JSON sequence output")

    parser = _Parser(prog="tokenspectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bands", parents=[common], help="print the band table for length n")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_bands)

    p = sub.add_parser("filter", parents=[common], help="band-stop filter one sequence file")
    p.add_argument("input")
    p.add_argument("--bands", default="c2")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("similarity", parents=[common], help="directional loss and similarity report")
    p.add_argument("--stylized", nargs="+", required=True)
    p.add_argument("--content", nargs="+", required=True)
    p.add_argument("--style", required=True, help="style text embedding (1-token ESEQ/JSON)")
    p.add_argument("--source", required=True, help="source text embedding (1-token ESEQ/JSON)")
    p.add_argument("--bands", default="c2")
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--proj")
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("sweep", parents=[common], help="per-frequency masking sweep")
    p.add_argument("sequences", nargs="+")
    p.add_argument("--text", required=True, help="probe text embedding (1-token ESEQ/JSON)")
    p.add_argument("--proj")
    p.set_defaults(func=cmd_sweep)
    return parser


def _fail(code, message):
    message = " ".join(str(message).split())
    print(f"error[{_KINDS[code]}]: {message}", file=sys.stderr)
    return code


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be >= 1")
        if not np.isfinite(getattr(args, "tau", 0.0)):
            raise UsageError("--tau must be finite")
        args.func(args)
    except (UsageError, BandSpecError) as exc:
        return _fail(EXIT_USAGE, exc)
    except SpectralError as exc:
        return _fail(exc.exit_code, exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
