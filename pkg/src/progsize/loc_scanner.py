"""Comment- and string-aware physical line counting.

A line counts as code when it holds at least one non-whitespace character
that is not inside a comment. String literals are code, so comment markers
inside them are ignored. Language rules live in :class:`LanguageProfile`
values; adding a language means registering another profile.
"""

from __future__ import annotations

import fnmatch
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DecodeError, UnknownLanguage
from .ingest import ProgramRecord


@dataclass(frozen=True)
class StringRule:
    open: str
    close: str
    escape: str | None = "\\"
    multiline: bool = False


@dataclass(frozen=True)
class LanguageProfile:
    name: str
    extensions: tuple[str, ...]
    line_comment_markers: tuple[str, ...] = ()
    block_comment_delimiters: tuple[tuple[str, str], ...] = ()
    string_rules: tuple[StringRule, ...] = ()
    nested_block_comments: bool = False

    def __post_init__(self) -> None:
        for open_, close in self.block_comment_delimiters:
            if not open_ or not close:
                raise ValueError(f"{self.name}: block comment delimiters must be non-empty")
        for rule in self.string_rules:
            if not rule.open or not rule.close:
                raise ValueError(f"{self.name}: string delimiters must be non-empty")


JAVA = LanguageProfile(
    name="java",
    extensions=(".java",),
    line_comment_markers=("//",),
    block_comment_delimiters=(("/*", "*/"),),
    string_rules=(
        StringRule('"""', '"""', "\\", multiline=True),  # text blocks
        StringRule('"', '"', "\\"),
        StringRule("'", "'", "\\"),
    ),
)

PROFILES: dict[str, LanguageProfile] = {JAVA.name: JAVA}


def register_profile(profile: LanguageProfile) -> None:
    PROFILES[profile.name] = profile


def get_profile(name: str) -> LanguageProfile:
    try:
        return PROFILES[name.lower()]
    except KeyError:
        raise UnknownLanguage(f"no language profile named {name!r}; known: {sorted(PROFILES)}") from None


def profile_for_path(path: str | os.PathLike[str]) -> LanguageProfile:
    suffix = Path(path).suffix.lower()
    for profile in PROFILES.values():
        if suffix in profile.extensions:
            return profile
    raise UnknownLanguage(f"no language profile for extension {suffix!r} ({path})")


@dataclass(frozen=True)
class SourceFile:
    path: str
    content: str
    language_profile: LanguageProfile = JAVA


def split_lines(text: str) -> list[str]:
    """Split on LF, dropping a CR before each LF.

    A trailing fragment without a newline is a line; a final LF does not
    start a new one.
    """
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return [ln[:-1] if ln.endswith("\r") else ln for ln in lines]


def _match_any(line: str, i: int, tokens: Iterable[str]) -> str | None:
    for tok in tokens:
        if line.startswith(tok, i):
            return tok
    return None


def count_loc_text(text: str, profile: LanguageProfile = JAVA) -> int:
    line_markers = sorted(profile.line_comment_markers, key=len, reverse=True)
    block_opens = sorted(profile.block_comment_delimiters, key=lambda d: len(d[0]), reverse=True)
    strings = sorted(profile.string_rules, key=lambda r: len(r.open), reverse=True)

    loc = 0
    # lexer state carried across lines
    block_close: str | None = None
    block_open: str | None = None
    depth = 0
    in_string: StringRule | None = None

    for line in split_lines(text):
        has_code = False
        i, n = 0, len(line)
        while i < n:
            if block_close is not None:
                if profile.nested_block_comments and line.startswith(block_open, i):
                    depth += 1
                    i += len(block_open)
                elif line.startswith(block_close, i):
                    i += len(block_close)
                    depth -= 1
                    if depth == 0:
                        block_close = block_open = None
                else:
                    i += 1
                continue
            if in_string is not None:
                ch = line[i]
                if not ch.isspace():
                    has_code = True
                if in_string.escape and line.startswith(in_string.escape, i):
                    i += len(in_string.escape) + 1
                elif line.startswith(in_string.close, i):
                    i += len(in_string.close)
                    in_string = None
                else:
                    i += 1
                continue
            ch = line[i]
            if ch.isspace():
                i += 1
                continue
            if _match_any(line, i, line_markers):
                break
            pair = next((d for d in block_opens if line.startswith(d[0], i)), None)
            if pair is not None:
                block_open, block_close = pair
                depth = 1
                i += len(block_open)
                continue
            rule = next((r for r in strings if line.startswith(r.open, i)), None)
            has_code = True
            if rule is not None:
                in_string = rule
                i += len(rule.open)
                continue
            i += 1
        if in_string is not None and not in_string.multiline:
            # an unterminated single-line literal ends with its line
            in_string = None
        if has_code:
            loc += 1
    return loc


def count_loc(file: SourceFile) -> int:
    return count_loc_text(file.content, file.language_profile)


def read_source(path: str | os.PathLike[str], profile: LanguageProfile | None = None, ident: str | None = None) -> SourceFile:
    path = Path(path)
    profile = profile or profile_for_path(path)
    raw = path.read_bytes()
    try:
        content = raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise DecodeError(f"{path}: not valid UTF-8 at byte {exc.start}") from None
    return SourceFile(ident or path.as_posix(), content, profile)


@dataclass
class ScanResult:
    records: list[ProgramRecord] = field(default_factory=list)
    # matched files with zero LOC; a ProgramRecord needs loc >= 1
    empty: list[str] = field(default_factory=list)
    errors: list[tuple[str, str]] = field(default_factory=list)


def _matches(rel: str, patterns: Sequence[str]) -> bool:
    name = rel.rsplit("/", 1)[-1]
    return any(fnmatch.fnmatchcase(rel, p) or fnmatch.fnmatchcase(name, p) for p in patterns)


def scan_tree(
    root: str | os.PathLike[str],
    include: Sequence[str] | None = None,
    exclude: Sequence[str] = (),
    lang: str = "java",
    workers: int | None = None,
) -> ScanResult:
    """Count LOC of every matching file under ``root``.

    Patterns are fnmatch globs tested against the root-relative POSIX path
    and against the bare file name. ``include`` defaults to the profile's
    extensions. Unreadable or undecodable files end up in ``errors``; the
    scan carries on.
    """
    root = Path(root)
    if not root.is_dir():
        raise NotADirectoryError(f"{root}: not a readable directory")
    profile = get_profile(lang)
    include = list(include) if include else [f"*{ext}" for ext in profile.extensions]

    result = ScanResult()
    candidates: list[tuple[str, Path]] = []

    def onerror(exc: OSError) -> None:
        result.errors.append((str(exc.filename), exc.strerror or str(exc)))

    for dirpath, dirnames, filenames in os.walk(root, onerror=onerror):
        dirnames.sort()
        for fname in filenames:
            full = Path(dirpath) / fname
            rel = full.relative_to(root).as_posix()
            if _matches(rel, include) and not _matches(rel, exclude) and full.is_file():
                candidates.append((rel, full))

    def work(item: tuple[str, Path]) -> tuple[str, int | None, str | None]:
        rel, full = item
        try:
            return rel, count_loc(read_source(full, profile, rel)), None
        except (OSError, DecodeError) as exc:
            return rel, None, str(exc)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        outcomes = list(pool.map(work, candidates))

    for rel, loc, err in sorted(outcomes, key=lambda o: o[0]):
        if err is not None:
            result.errors.append((rel, err))
        elif loc == 0:
            result.empty.append(rel)
        else:
            result.records.append(ProgramRecord(rel, loc))
    result.errors.sort()
    return result
