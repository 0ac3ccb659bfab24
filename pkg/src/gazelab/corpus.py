"""Token records and the tabular file formats they travel in."""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import FormatError
from .g2p import IpaString

ID_COLUMNS = ("language", "sentence_id", "word_id", "word")
LABEL_COLUMNS = ("FFDAvg", "FFDStd", "TRTAvg", "TRTStd")


@dataclass(frozen=True)
class Token:
    language: str
    sentence_id: str
    word_id: str
    word: str
    ipa: IpaString | None = None
    labels: dict = field(default_factory=dict, compare=False)
    extra: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def row_id(self) -> tuple[str, str, str]:
        return (self.language, self.sentence_id, self.word_id)

    def with_ipa(self, ipa: IpaString) -> "Token":
        return replace(self, ipa=ipa)


def row_sort_key(row_id) -> tuple:
    """Order row ids by language, then numerically by sentence and word id."""

    def part(value):
        try:
            return (0, float(value), "")
        except ValueError:
            return (1, 0.0, str(value))

    language, sentence_id, word_id = row_id
    return (language, part(sentence_id), part(word_id))


def _sniff_delimiter(header: str) -> str:
    return "\t" if "\t" in header else ","


def read_table(path) -> tuple[list[str], list[dict]]:
    """Read a tab- or comma-separated file with a header row."""
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    if not text.strip():
        raise FormatError("empty file", path)
    if text.startswith("﻿"):
        text = text[1:]
    delimiter = _sniff_delimiter(text.split("\n", 1)[0])
    reader = csv.reader(io.StringIO(text), delimiter=delimiter, quoting=csv.QUOTE_NONE
                        if delimiter == "\t" else csv.QUOTE_MINIMAL)
    header = next(reader)
    rows = []
    for lineno, cols in enumerate(reader, start=2):
        if not cols:
            continue
        if len(cols) != len(header):
            raise FormatError(
                f"expected {len(header)} columns, got {len(cols)}", path, lineno
            )
        rows.append(dict(zip(header, cols)))
    return header, rows


def _parse_float(value: str, column: str, path, lineno: int) -> float:
    try:
        x = float(value)
    except ValueError:
        raise FormatError(f"column {column}: not a number: {value!r}", path, lineno) from None
    if not math.isfinite(x):
        raise FormatError(f"column {column}: non-finite value", path, lineno)
    return x


def read_tokens(path) -> list[Token]:
    """Read a corpus file with the shared-task columns.

    Label columns are optional (test files carry none, or leave them blank).
    An ``ipa`` column, if present, holds space-separated phonemes.
    """
    header, rows = read_table(path)
    missing = [c for c in ID_COLUMNS if c not in header]
    if missing:
        raise FormatError(f"missing columns: {', '.join(missing)}", path, 1)
    known = set(ID_COLUMNS) | set(LABEL_COLUMNS) | {"ipa"}
    tokens = []
    for lineno, row in enumerate(rows, start=2):
        labels = {
            c: _parse_float(row[c], c, path, lineno)
            for c in LABEL_COLUMNS
            if c in row and row[c].strip() != ""
        }
        ipa = IpaString.from_symbols(row["ipa"]) if "ipa" in row else None
        extra = {k: v for k, v in row.items() if k not in known}
        tokens.append(
            Token(row["language"], row["sentence_id"], row["word_id"], row["word"],
                  ipa, labels, extra)
        )
    return tokens


def format_float(x: float, places: int | None = None) -> str:
    if places is not None:
        out = f"{x:.{places}f}"
        # "-0.0000" would make outputs depend on the sign of rounding noise
        return out[1:] if out.startswith("-") and float(out) == 0 else out
    return repr(float(x))


def render_tsv(header, rows) -> str:
    lines = ["\t".join(header)]
    for row in rows:
        lines.append("\t".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the same directory and rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
