"""CSV interchange: feature matrices and subject labels.

Feature CSV: header `session_id,<190 column names>`, one row per session,
missing values as empty fields, RFC-4180 quoting. Labels CSV: header
`session_id,diagnosis,mmse,mtl_atrophy_z` with empty fields for absent labels.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ..errors import MalformedInput
from ..strokes import DIAGNOSES, SubjectRecord
from .extract import SessionFeatureVector
from .registry import SESSION_COLUMNS

LABEL_COLUMNS = ("session_id", "diagnosis", "mmse", "mtl_atrophy_z")


def write_features_csv(path: str | Path, vectors: list[SessionFeatureVector]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("session_id",) + SESSION_COLUMNS)
        for vec in vectors:
            row = [vec.session_id]
            for v, m in zip(vec.values, vec.missing):
                row.append("" if m else repr(float(v)))
            writer.writerow(row)


def read_features_csv(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Read a feature CSV; returns (session ids, (n, 190) matrix with NaN)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedInput(f"{path}: empty feature file") from None
        expected = ["session_id"] + list(SESSION_COLUMNS)
        if header != expected:
            raise MalformedInput(f"{path}: header does not match the feature registry")
        ids: list[str] = []
        rows: list[np.ndarray] = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(expected):
                raise MalformedInput(f"{path}:{lineno}: expected {len(expected)} fields")
            ids.append(row[0])
            vals = np.array(
                [np.nan if cell == "" else float(cell) for cell in row[1:]],
                dtype=np.float64,
            )
            rows.append(vals)
    X = np.vstack(rows) if rows else np.empty((0, len(SESSION_COLUMNS)))
    return ids, X


def write_labels_csv(path: str | Path, records: dict[str, SubjectRecord]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(LABEL_COLUMNS)
        for session_id, rec in records.items():
            writer.writerow([
                session_id,
                rec.diagnosis or "",
                "" if rec.mmse is None else str(rec.mmse),
                "" if rec.mtl_atrophy_z is None else repr(float(rec.mtl_atrophy_z)),
            ])


def read_labels_csv(path: str | Path) -> dict[str, SubjectRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedInput(f"{path}: empty labels file") from None
        if header != list(LABEL_COLUMNS):
            raise MalformedInput(f"{path}: labels header must be {','.join(LABEL_COLUMNS)}")
        out: dict[str, SubjectRecord] = {}
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise MalformedInput(f"{path}:{lineno}: expected 4 fields")
            session_id, diagnosis, mmse, mtl = row
            if diagnosis and diagnosis not in DIAGNOSES:
                raise MalformedInput(f"{path}:{lineno}: unknown diagnosis {diagnosis!r}")
            out[session_id] = SubjectRecord(
                diagnosis=diagnosis or None,
                mmse=int(mmse) if mmse else None,
                mtl_atrophy_z=float(mtl) if mtl else None,
            )
    return out
