"""Command-line surface.

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 method
precondition error. With --json, errors are emitted as a JSON object on
stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from .baselines import MmdConfig, ProxyClassifierConfig, mmd_gaussian, proxy_a_distance, silhouette
from .embed_core import LabeledEmbeddingSet
from .errors import AdaptScoreError, DataError, FormatError
from .evaluation import pearson, spearman, subsample_study
from .formats import (
    dump_report,
    load_accuracy_csv,
    load_embeddings,
    load_labels,
    load_manifest,
    save_embeddings,
    save_labels,
)
from .reporting import build_report, load_candidate, load_target
from .scores import oracle_score, pas, pas_avg_pairwise, pas_euclidean
from .synth import SynthConfig, generate_pair

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_PRECONDITION = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="adaptscore")
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score one source/target pair")
    p_score.add_argument("--method", required=True)
    p_score.add_argument("--source-emb", required=True)
    p_score.add_argument("--source-labels", required=True)
    p_score.add_argument("--target-emb", required=True)
    p_score.add_argument("--target-labels")
    p_score.add_argument("--seed", type=int, default=0)
    p_score.add_argument("--max-samples", type=int, default=10_000)
    p_score.add_argument("--json", action="store_true")

    p_rank = sub.add_parser("rank", help="score and rank manifest candidates")
    p_rank.add_argument("--manifest", required=True)
    p_rank.add_argument("--out", required=True)
    p_rank.add_argument("--json", action="store_true")

    p_corr = sub.add_parser("corr", help="correlate report scores with accuracies")
    p_corr.add_argument("--report", required=True)
    p_corr.add_argument("--accuracy", required=True)
    p_corr.add_argument("--method", default="pas")
    p_corr.add_argument("--json", action="store_true")

    p_synth = sub.add_parser("synth", help="generate a synthetic source/target pair")
    p_synth.add_argument("--config", required=True)
    p_synth.add_argument("--out-dir", required=True)
    p_synth.add_argument("--json", action="store_true")

    p_sub = sub.add_parser("substudy", help="subsample-robustness study")
    p_sub.add_argument("--manifest", required=True)
    p_sub.add_argument("--fractions", required=True, help="comma-separated, e.g. 0.1,0.5,1.0")
    p_sub.add_argument("--repeats", type=int, default=10)
    p_sub.add_argument("--out", required=True)
    p_sub.add_argument("--json", action="store_true")
    return parser


def _cmd_score(args) -> int:
    source_emb = load_embeddings(args.source_emb)
    labels = load_labels(args.source_labels)
    source = LabeledEmbeddingSet(source_emb, labels, int(labels.max()) + 1)
    target = load_embeddings(args.target_emb)

    if args.method == "pas":
        result = pas(source, target)
    elif args.method == "pas_euclidean":
        result = pas_euclidean(source, target)
    elif args.method == "pas_avg_pairwise":
        result = pas_avg_pairwise(source, target)
    elif args.method == "oracle":
        if not args.target_labels:
            raise DataError("oracle requires --target-labels")
        tlabels = load_labels(args.target_labels)
        result = oracle_score(source, LabeledEmbeddingSet(target, tlabels, source.num_classes, require_all_classes=False))
    elif args.method == "mmd":
        cfg = MmdConfig(max_samples_per_domain=args.max_samples, seed=args.seed)
        value = mmd_gaussian(source.embeddings, target, cfg)
        result = None
    elif args.method == "adist":
        cfg = ProxyClassifierConfig(seed=args.seed)
        value = proxy_a_distance(source.embeddings, target, cfg)
        result = None
    elif args.method == "silhouette":
        value = silhouette(source)
        result = None
    else:
        raise DataError(f"unknown method {args.method!r}")

    if result is not None:
        value = result.value
    if args.json:
        payload = {"method": args.method, "value": value}
        if result is not None:
            payload["breakdown"] = [dataclasses.asdict(b) for b in result.breakdown]
        print(json.dumps(payload))
    else:
        print(f"{value:.5f}")
    return EXIT_OK


def _cmd_rank(args) -> int:
    manifest = load_manifest(args.manifest)
    report = build_report(manifest)
    dump_report(report, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_corr(args) -> int:
    with open(args.report) as fh:
        report = json.load(fh)
    accuracy = load_accuracy_csv(args.accuracy)
    xs, ys = [], []
    for row in report["rows"]:
        cid = row["candidate_id"]
        if cid in accuracy:
            xs.append(row["method_scores"][args.method])
            ys.append(accuracy[cid])
    p = pearson(xs, ys)
    s = spearman(xs, ys)
    if args.json:
        print(json.dumps({"pearson": p, "spearman": s, "n": len(xs)}))
    else:
        print(f"{p:.2f} / {s:.2f}")
    return EXIT_OK


def _cmd_synth(args) -> int:
    with open(args.config) as fh:
        cfg = SynthConfig.from_dict(json.load(fh))
    source, target = generate_pair(cfg)
    from pathlib import Path

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_embeddings(out / "source_emb.pemb", source.embeddings)
    save_labels(out / "source_labels.plbl", source.labels)
    save_embeddings(out / "target_emb.pemb", target.embeddings)
    save_labels(out / "target_labels.plbl", target.labels)
    print(f"wrote 4 files to {out}")
    return EXIT_OK


def _cmd_substudy(args) -> int:
    manifest = load_manifest(args.manifest)
    target_emb, _ = load_target(manifest["target"])
    sources = [load_candidate(c) for c in manifest["candidates"]]
    ids = [c["id"] for c in manifest["candidates"]]
    fractions = [float(f) for f in args.fractions.split(",")]
    result = subsample_study(
        sources,
        target_emb,
        fractions,
        repeats=args.repeats,
        base_seed=int(manifest.get("seed", 0)),
        candidate_ids=ids,
    )
    with open(args.out, "w") as fh:
        json.dump(dataclasses.asdict(result), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out}")
    return EXIT_OK


_COMMANDS = {
    "score": _cmd_score,
    "rank": _cmd_rank,
    "corr": _cmd_corr,
    "synth": _cmd_synth,
    "substudy": _cmd_substudy,
}


def _emit_error(exc: Exception, as_json: bool, code: int) -> None:
    if as_json:
        sys.stderr.write(
            json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code})
            + "\n"
        )
    else:
        sys.stderr.write(f"error: {exc}\n")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    as_json = getattr(args, "json", False)
    try:
        return _COMMANDS[args.command](args)
    except FormatError as exc:
        _emit_error(exc, as_json, EXIT_DATA)
        return EXIT_DATA
    except (FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        _emit_error(exc, as_json, EXIT_DATA)
        return EXIT_DATA
    except (DataError, AdaptScoreError) as exc:
        _emit_error(exc, as_json, EXIT_PRECONDITION)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
