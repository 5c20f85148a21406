"""Command-line entry point: inkscreen extract|evaluate|permtest|train|predict|synth|serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bundle import bundle_predict, dataset_fingerprint, load_bundle, save_bundle, train_bundle
from .config import load_config
from .errors import IdMismatch, InkError
from .evaluation.engine import nested_cv
from .evaluation.permutation import permutation_test
from .features.extract import extract_session_features
from .features.registry import N_SESSION_FEATURES
from .features.tables import (
    read_features_csv,
    read_labels_csv,
    write_features_csv,
    write_labels_csv,
)
from .strokes import DIAGNOSES, parse_session, session_to_json_bytes
from .synth import CohortSpec, generate_cohort, table1_thetas


def _collect_session_paths(inputs: list[str]) -> list[Path]:
    paths: list[Path] = []
    for raw in inputs:
        p = Path(raw)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.json")))
        else:
            paths.append(p)
    return paths


def cmd_extract(args) -> int:
    cfg = load_config(args.config)
    paths = _collect_session_paths(args.inputs)
    if not paths:
        print("no sessions found", file=sys.stderr)
        return 1
    vectors = []
    failed = 0
    for path in paths:
        try:
            session = parse_session(path.read_bytes())
            vectors.append(extract_session_features(session, cfg.smoothing_window))
        except (InkError, OSError) as exc:
            failed += 1
            print(f"{path}: {type(exc).__name__}: {exc}", file=sys.stderr)
    if not vectors:
        print("no sessions found", file=sys.stderr)
        return 1
    write_features_csv(args.out, vectors)
    return 1 if failed else 0


def _load_dataset(features_path, labels_path, target, classes_filter=None):
    ids, X = read_features_csv(features_path)
    labels = read_labels_csv(labels_path)
    missing_ids = [i for i in ids if i not in labels]
    if missing_ids:
        raise IdMismatch(f"{len(missing_ids)} session(s) without labels, e.g. {missing_ids[0]!r}")
    keep_rows = []
    y_list = []
    for row, sid in enumerate(ids):
        rec = labels[sid]
        if target == "diagnosis":
            if rec.diagnosis is None:
                continue
            if classes_filter and rec.diagnosis not in classes_filter:
                continue
            y_list.append(DIAGNOSES.index(rec.diagnosis))
        elif target == "mmse":
            if rec.mmse is None:
                continue
            y_list.append(float(rec.mmse))
        else:
            if rec.mtl_atrophy_z is None:
                continue
            y_list.append(float(rec.mtl_atrophy_z))
        keep_rows.append(row)
    if not keep_rows:
        raise IdMismatch(f"no rows carry a {target} label")
    task = "classification" if target == "diagnosis" else "regression"
    y = np.array(y_list, dtype=np.int64 if task == "classification" else np.float64)
    return [ids[r] for r in keep_rows], X[keep_rows], y, task


def _cv_kwargs(cfg, args):
    return dict(
        grid=cfg.grid(),
        families=cfg.families,
        repeats=cfg.repeats,
        outer_k=cfg.outer_k,
        inner_k=cfg.inner_k,
        selection_c=cfg.selection_c,
        n_trees=cfg.n_trees,
        seed=args.seed,
    )


def cmd_evaluate(args) -> int:
    cfg = load_config(args.config)
    classes = tuple(args.classes.split(",")) if args.classes else None
    _, X, y, task = _load_dataset(args.features, args.labels, args.target, classes)
    result = nested_cv(X, y, task, **_cv_kwargs(cfg, args))
    report = result.to_dict()
    report["target"] = args.target
    Path(args.out).write_text(json.dumps(report, indent=1), encoding="utf-8")
    head = result.summary[result.headline_metric]
    print(f"{args.target}: {result.headline_metric} mean {head['mean']:.4f} "
          f"[{head['ci_low']:.4f}, {head['ci_high']:.4f}] over {result.repeats} repeats")
    return 0


def cmd_permtest(args) -> int:
    cfg = load_config(args.config)
    classes = tuple(args.classes.split(",")) if args.classes else None
    _, X, y, task = _load_dataset(args.features, args.labels, args.target, classes)
    result = permutation_test(X, y, task, n_perm=args.n_perm, **_cv_kwargs(cfg, args))
    report = result.to_dict()
    report["target"] = args.target
    Path(args.out).write_text(json.dumps(report, indent=1), encoding="utf-8")
    print(f"{args.target}: observed {result.headline_metric} {result.observed:.4f}, "
          f"p = {result.p_value:.5f} over {result.n_perm} permutations")
    return 0


def cmd_train(args) -> int:
    cfg = load_config(args.config)
    ids, X = read_features_csv(args.features)
    labels = read_labels_csv(args.labels)
    missing_ids = [i for i in ids if i not in labels]
    if missing_ids:
        raise IdMismatch(f"{len(missing_ids)} session(s) without labels, e.g. {missing_ids[0]!r}")
    targets = {
        "diagnosis": np.array([labels[i].diagnosis for i in ids], dtype=object),
        "mmse": np.array(
            [np.nan if labels[i].mmse is None else float(labels[i].mmse) for i in ids]
        ),
        "mtl": np.array(
            [np.nan if labels[i].mtl_atrophy_z is None else labels[i].mtl_atrophy_z for i in ids]
        ),
    }
    bundle = train_bundle(
        X, targets, seed=args.seed, grid=cfg.grid(),
        selection_c=cfg.selection_c, inner_k=cfg.inner_k, n_trees=cfg.n_trees,
        metadata={"dataset_fingerprint": dataset_fingerprint(ids, X)},
    )
    save_bundle(bundle, args.out)
    print(f"trained targets: {', '.join(bundle.targets) or 'none'} -> {args.out}")
    return 0


def cmd_predict(args) -> int:
    cfg = load_config(args.config)
    bundle = load_bundle(args.bundle)
    if args.input.endswith(".csv"):
        ids, X = read_features_csv(args.input)
    else:
        paths = _collect_session_paths([args.input])
        if not paths:
            print("no sessions found", file=sys.stderr)
            return 1
        ids, rows = [], []
        for path in paths:
            session = parse_session(path.read_bytes())
            vec = extract_session_features(session, cfg.smoothing_window)
            ids.append(session.session_id)
            rows.append(vec.values)
        X = np.vstack(rows)
    preds = bundle_predict(bundle, X)
    out = []
    for i, sid in enumerate(ids):
        entry: dict = {"session_id": sid}
        if preds["probabilities"] is not None:
            entry["probabilities"] = {
                name: float(preds["probabilities"][i, k]) for k, name in enumerate(DIAGNOSES)
            }
        else:
            entry["probabilities"] = None
        entry["mmse"] = None if preds["mmse"] is None else float(preds["mmse"][i])
        entry["mtl_atrophy_z"] = None if preds["mtl"] is None else float(preds["mtl"][i])
        out.append(entry)
    payload = json.dumps({"schema_version": 1, "predictions": out}, indent=1)
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        print(payload)
    return 0


def cmd_synth(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.counts:
        counts = tuple(int(c) for c in args.counts.split(","))
        if len(counts) != 3:
            raise InkError("--counts needs three comma-separated integers")
        thetas = table1_thetas(args.seed, counts)
        sessions = generate_cohort(thetas=thetas, seed=args.seed)
    else:
        sessions = generate_cohort(n=args.n, seed=args.seed)
    records = {}
    for session in sessions:
        (out_dir / f"{session.session_id}.json").write_bytes(session_to_json_bytes(session))
        records[session.session_id] = session.subject
    write_labels_csv(out_dir / "labels.csv", records)
    print(f"wrote {len(sessions)} sessions + labels.csv to {out_dir}")
    return 0


def cmd_serve(args) -> int:
    from .service import run_service

    cfg = load_config(args.config)
    host, _, port = args.addr.rpartition(":")
    run_service(
        host=host or "127.0.0.1",
        port=int(port),
        bundle_path=args.bundle,
        store_dir=args.store_dir,
        webapp_dir=args.webapp_dir,
        smoothing_window=cfg.smoothing_window,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inkscreen",
        description="Drawing-process analysis pipeline: extraction, evaluation, screening.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--config", default=None, help="JSON config file")

    p = sub.add_parser("extract", help="extract the 190-feature vectors to CSV")
    p.add_argument("inputs", nargs="+", help="session files or directories")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("evaluate", help="nested cross-validation report")
    p.add_argument("--features", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--target", choices=("diagnosis", "mmse", "mtl"), required=True)
    p.add_argument("--classes", default=None, help="restrict diagnosis rows, e.g. CN,DEMENTIA")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("permtest", help="permutation significance test")
    p.add_argument("--features", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--target", choices=("diagnosis", "mmse", "mtl"), required=True)
    p.add_argument("--classes", default=None)
    p.add_argument("--n-perm", type=int, default=100)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_permtest)

    p = sub.add_parser("train", help="train and persist a screening bundle")
    p.add_argument("--features", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict from a bundle")
    p.add_argument("--bundle", required=True)
    p.add_argument("--input", required=True, help="session file/dir or features CSV")
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("synth", help="generate a synthetic cohort")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--counts", default=None, help="CN,MCI,DEMENTIA group sizes, e.g. 46,67,32")
    common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("serve", help="run the screening HTTP service")
    p.add_argument("--addr", default="127.0.0.1:8377")
    p.add_argument("--bundle", default=None)
    p.add_argument("--store-dir", required=True)
    p.add_argument("--webapp-dir", default=None, help="serve static files from this directory")
    common(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InkError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
