"""Program records and the file formats they are loaded from.

Two input routes exist:

* the canonical CSV (``id,loc,pre_defects,post_defects``; the defect columns
  are optional) which is also what ``progsize scan`` writes, and
* the file-level CSVs of the public Eclipse bug dataset (version 2.0 of the
  Zimmermann/Premraj/Zeller PROMISE release), read by
  :func:`import_eclipse_dataset`.
"""

from __future__ import annotations

import csv
import gzip
import io
import zipfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal, Sequence, TextIO

from .errors import BadRow, DuplicateId, FormatMismatch, MissingDefectData, MissingHeader

DefectKind = Literal["pre", "post"]

CANONICAL_HEADER = ("id", "loc", "pre_defects", "post_defects")


@dataclass(frozen=True)
class ProgramRecord:
    id: str
    loc: int
    pre_defects: int | None = None
    post_defects: int | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("record id must be non-empty")
        if self.loc < 1:
            raise ValueError(f"{self.id}: loc must be >= 1, got {self.loc}")
        for name in ("pre_defects", "post_defects"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{self.id}: {name} must be >= 0, got {value}")

    def defects(self, kind: DefectKind) -> int | None:
        return self.pre_defects if kind == "pre" else self.post_defects


@dataclass(frozen=True)
class Dataset:
    name: str = ""
    version_label: str = ""
    records: tuple[ProgramRecord, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        seen: set[str] = set()
        for rec in self.records:
            if rec.id in seen:
                raise DuplicateId(rec.id)
            seen.add(rec.id)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def sizes(self) -> list[int]:
        return [r.loc for r in self.records]

    def has_defects(self, kind: DefectKind) -> bool:
        return bool(self.records) and all(r.defects(kind) is not None for r in self.records)

    def require_defects(self, kind: DefectKind) -> None:
        missing = sum(1 for r in self.records if r.defects(kind) is None)
        if missing:
            raise MissingDefectData(
                f"{missing} of {len(self.records)} records lack {kind}-release defect counts"
            )


def _parse_count(text: str, column: str, line: int, *, minimum: int, optional: bool) -> int | None:
    text = text.strip()
    if text == "":
        if optional:
            return None
        raise BadRow(line, f"{column} is empty")
    try:
        value = int(text)
    except ValueError:
        raise BadRow(line, f"{column} is not an integer: {text!r}") from None
    if value < minimum:
        raise BadRow(line, f"{column} must be >= {minimum}, got {value}")
    return value


def parse_canonical_csv(stream: TextIO | str, name: str = "", version_label: str = "") -> Dataset:
    """Parse canonical records CSV text (or an open text stream)."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    header = None
    for row in reader:
        if row and not (len(row) == 1 and not row[0].strip()):
            header = [h.strip() for h in row]
            break
    if header is None:
        raise MissingHeader("no header row; expected " + ",".join(CANONICAL_HEADER))
    if header and header[0].startswith("﻿"):
        header[0] = header[0][1:]
    if len(header) < 2 or tuple(header) != CANONICAL_HEADER[: len(header)]:
        raise MissingHeader(
            f"header must start with 'id,loc' (optionally ',pre_defects,post_defects'), got {','.join(header)!r}"
        )
    width = len(header)

    records: list[ProgramRecord] = []
    seen: dict[str, int] = {}
    for row in reader:
        line = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != width:
            raise BadRow(line, f"expected {width} fields, got {len(row)}")
        ident = row[0].strip()
        if not ident:
            raise BadRow(line, "id is empty")
        if ident in seen:
            raise DuplicateId(ident, line)
        seen[ident] = line
        loc = _parse_count(row[1], "loc", line, minimum=1, optional=False)
        pre = _parse_count(row[2], "pre_defects", line, minimum=0, optional=True) if width > 2 else None
        post = _parse_count(row[3], "post_defects", line, minimum=0, optional=True) if width > 3 else None
        records.append(ProgramRecord(ident, loc, pre, post))
    return Dataset(name, version_label, tuple(records))


def write_canonical_csv(records: Iterable[ProgramRecord], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CANONICAL_HEADER)
    for r in records:
        writer.writerow([
            r.id,
            r.loc,
            "" if r.pre_defects is None else r.pre_defects,
            "" if r.post_defects is None else r.post_defects,
        ])


def export_canonical_csv(dataset: Dataset | Sequence[ProgramRecord]) -> str:
    buf = io.StringIO()
    records = dataset.records if isinstance(dataset, Dataset) else dataset
    write_canonical_csv(records, buf)
    return buf.getvalue()


def load_canonical_csv(path: str | Path, name: str | None = None, version_label: str = "") -> Dataset:
    path = Path(path)
    with path.open("r", encoding="utf-8-sig", newline="") as fh:
        return parse_canonical_csv(fh, name if name is not None else path.stem, version_label)


# --- Eclipse bug dataset ---------------------------------------------------
#
# The file-level tables are named ``files-<version>.csv`` (``eclipse-metrics-
# files-<version>.csv`` in some mirrors) and are ';'-separated with a header
# row.  Columns used here:
#
#   filename -> ProgramRecord.id    (e.g. org/eclipse/ant/core/AntCorePlugin.java)
#   TLOC     -> ProgramRecord.loc   (total lines of code of the compilation unit)
#   pre      -> pre_defects         (defects reported six months before release)
#   post     -> post_defects        (defects reported six months after release)
#
# Every other column (plugin, ACD, FOUT_*, MLOC_*, ...) is ignored.  A file
# with the same layout but ',' delimiters is accepted as well.

ECLIPSE_COLUMNS = {"id": "filename", "loc": "TLOC", "pre": "pre", "post": "post"}


def _read_text(path: Path, version_label: str) -> str:
    if path.suffix == ".zip":
        with zipfile.ZipFile(path) as zf:
            members = [m for m in zf.namelist() if m.endswith(".csv") and "files" in Path(m).name]
            if version_label:
                members = [m for m in members if version_label in Path(m).name] or members
            if len(members) != 1:
                raise FormatMismatch(
                    f"{path}: expected exactly one file-level CSV in archive, found {members or 'none'}"
                )
            raw = zf.read(members[0])
    elif path.suffix == ".gz":
        raw = gzip.decompress(path.read_bytes())
    else:
        raw = path.read_bytes()
    try:
        return raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise FormatMismatch(f"{path}: not UTF-8 text at byte {exc.start}") from None


def _eclipse_int(cell: str) -> int:
    # some exports write counts as "12.0"
    try:
        return int(cell)
    except ValueError:
        value = float(cell)
        if not value.is_integer():
            raise
        return int(value)


def parse_eclipse_csv(text: str, version_label: str = "", source: str = "<text>") -> Dataset:
    first = text.split("\n", 1)[0]
    delimiter = ";" if first.count(";") >= first.count(",") else ","
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise FormatMismatch(f"{source}: empty file, expected a header row") from None
    index = {}
    for key, column in ECLIPSE_COLUMNS.items():
        if column not in header:
            raise FormatMismatch(f"{source}: header lacks column {column!r}")
        index[key] = header.index(column)

    records: list[ProgramRecord] = []
    seen: set[str] = set()
    for row in reader:
        line = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            raise FormatMismatch(
                f"{source}: line {line} has {len(row)} fields, header has {len(header)} (truncated file?)"
            )
        values = {}
        for key in ("loc", "pre", "post"):
            cell = row[index[key]].strip()
            try:
                values[key] = _eclipse_int(cell)
            except ValueError:
                raise FormatMismatch(
                    f"{source}: line {line} column {ECLIPSE_COLUMNS[key]!r}: unparseable value {cell!r}"
                ) from None
        ident = row[index["id"]].strip()
        if not ident or ident in seen:
            raise FormatMismatch(f"{source}: line {line} column 'filename': empty or duplicate {ident!r}")
        seen.add(ident)
        try:
            records.append(ProgramRecord(ident, values["loc"], values["pre"], values["post"]))
        except ValueError as exc:
            raise FormatMismatch(f"{source}: line {line}: {exc}") from None
    if not records:
        raise FormatMismatch(f"{source}: header present but no data rows")
    return Dataset(f"eclipse-{version_label}" if version_label else "eclipse", version_label, tuple(records))


def import_eclipse_dataset(files: str | Path | Sequence[str | Path], version_label: str = "") -> Dataset:
    """Load one Eclipse release from its file-level metrics table.

    ``files`` may be the CSV itself, a gzip of it, the release zip, or a
    directory holding ``*files-<version_label>.csv``.
    """
    paths = [Path(files)] if isinstance(files, (str, Path)) else [Path(f) for f in files]
    resolved: list[Path] = []
    for p in paths:
        if p.is_dir():
            hits = sorted(
                q for q in p.iterdir()
                if "files" in q.name and (not version_label or f"-{version_label}." in q.name)
            )
            if not hits:
                raise FormatMismatch(f"{p}: no file-level table for version {version_label!r}")
            resolved.append(hits[0])
        else:
            resolved.append(p)
    if len(resolved) != 1:
        raise FormatMismatch(f"expected one file-level table, got {len(resolved)}")
    path = resolved[0]
    return parse_eclipse_csv(_read_text(path, version_label), version_label, str(path))
