from __future__ import annotations

import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from progsize.errors import DecodeError, UnknownLanguage
from progsize.loc_scanner import (
    JAVA,
    LanguageProfile,
    SourceFile,
    StringRule,
    count_loc,
    count_loc_text,
    profile_for_path,
    read_source,
    scan_tree,
    split_lines,
)


def test_empty_file():
    assert count_loc(SourceFile("A.java", "")) == 0


def test_blank_and_comment_only_file():
    text = "\n   \n// one\n/* two */\n/* three\n */\n"
    assert len(split_lines(text)) == 6
    assert count_loc_text(text) == 0


def test_code_after_block_close():
    text = "class A {\n/* doc\ncomment */ int x; // t\n}\n"
    assert count_loc_text(text) == 3


@pytest.mark.parametrize(
    "text, expected",
    [
        ('String s = "//x";', 1),
        ('String s = "/*"; int y;\nint z;', 2),
        ("x = 1; // trailing", 1),
        ("/* a */ /* b */", 0),
        ("/* a */ b", 1),
        ("'\"' // quote char", 1),
    ],
)
def test_single_line_cases(text, expected):
    assert count_loc_text(text) == expected


def test_split_lines_rules():
    assert split_lines("") == []
    assert split_lines("a") == ["a"]
    assert split_lines("a\n") == ["a"]
    assert split_lines("a\r\nb\r\n") == ["a", "b"]
    assert split_lines("a\n\n") == ["a", ""]


def test_unterminated_block_runs_to_eof():
    assert count_loc_text("int a;\n/*\nint b;\nint c;") == 1


def test_nested_comments_are_opt_in():
    text = "/* a /* b */ still */\nint x;\n"
    assert count_loc_text(text, JAVA) == 2
    nested = LanguageProfile(
        "nestjava", (".nj",), ("//",), (("/*", "*/"),), (StringRule('"', '"'),), nested_block_comments=True
    )
    assert count_loc_text(text, nested) == 1


def test_profile_rejects_empty_delimiters():
    with pytest.raises(ValueError):
        LanguageProfile("bad", (".b",), (), (("", "*/"),))


def test_hash_comment_profile_needs_no_core_change():
    py = LanguageProfile("hashlang", (".hl",), ("#",), (), (StringRule("'", "'"),))
    assert count_loc_text("# c\nx = '#'\n\ny = 1  # t\n", py) == 2


def test_unknown_extension():
    with pytest.raises(UnknownLanguage):
        profile_for_path("script.cobol")


def test_undecodable_file(tmp_path):
    p = tmp_path / "Bad.java"
    p.write_bytes(b"int x;\n\xff\xfe\xfa\n")
    with pytest.raises(DecodeError):
        read_source(p)


# --- properties ---------------------------------------------------------------

java_chars = st.sampled_from(list('ab /*"\'\\\t\n;{}') + ["//", "/*", "*/", '"""'])
java_text = st.lists(java_chars, max_size=80).map("".join)
filler = st.lists(
    st.sampled_from(["", "   ", "\t", "// note", "/* c */", "  /* x */  // y"]), max_size=6
)


@settings(max_examples=300, deadline=None)
@given(java_text)
def test_loc_never_exceeds_physical_lines(text):
    assert 0 <= count_loc_text(text) <= len(split_lines(text))


# balanced tokens: any concatenation leaves the lexer outside comments and literals
balanced = st.lists(
    st.sampled_from(
        ["int", " ", "\t", ";", "\n", '"a//b"', '"/*"', "'\"'", "// c\n", "/* c */", "/* multi\n line */",
         '"""\n  text // x\n  """', "x / y", "a * b"]
    ),
    max_size=40,
).map("".join)


@settings(max_examples=300, deadline=None)
@given(balanced, filler)
def test_appending_blank_or_comment_lines_is_neutral(text, extra):
    base = count_loc_text(text + "\n")
    assert count_loc_text(text + "\n" + "\n".join(extra) + "\n") == base


# --- scan_tree --------------------------------------------------------------

def _write(root, rel, text):
    path = root / rel
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def test_scan_empty_directory(tmp_path):
    (tmp_path / "notes.txt").write_text("hello")
    result = scan_tree(tmp_path)
    assert result.records == [] and result.errors == []


def test_scan_two_files(tmp_path):
    _write(tmp_path, "b/B.java", "class B {\n  int x;\n}\n")  # 3
    _write(tmp_path, "a/A.java", "// A\nclass A {\n int a;\n int b;\n\n int c;\n int d;\n /* e */ int e;\n}\n")  # 7
    result = scan_tree(tmp_path)
    assert [(r.id, r.loc) for r in result.records] == [("a/A.java", 7), ("b/B.java", 3)]
    assert all(r.pre_defects is None and r.post_defects is None for r in result.records)


def test_scan_is_deterministic_across_workers(tmp_path):
    for i in range(30):
        _write(tmp_path, f"pkg{i % 4}/C{i}.java", "class C {\n" + "int x;\n" * (i + 1) + "}\n")
    once = scan_tree(tmp_path, workers=1)
    again = scan_tree(tmp_path, workers=8)
    assert once.records == again.records
    assert [r.id for r in once.records] == sorted(r.id for r in once.records)


def test_scan_include_exclude(tmp_path):
    _write(tmp_path, "src/A.java", "int a;\n")
    _write(tmp_path, "test/ATest.java", "int t;\n")
    _write(tmp_path, "gen/G.java", "int g;\n")
    result = scan_tree(tmp_path, exclude=["gen/*"])
    assert [r.id for r in result.records] == ["src/A.java", "test/ATest.java"]
    result = scan_tree(tmp_path, include=["src/*"])
    assert [r.id for r in result.records] == ["src/A.java"]


def test_scan_collects_errors_and_continues(tmp_path):
    _write(tmp_path, "Good.java", "int a;\n")
    (tmp_path / "Bad.java").write_bytes(b"\xff\xfe int\n")
    _write(tmp_path, "Empty.java", "// nothing here\n")
    result = scan_tree(tmp_path)
    assert [r.id for r in result.records] == ["Good.java"]
    assert [e[0] for e in result.errors] == ["Bad.java"]
    assert result.empty == ["Empty.java"]


@pytest.mark.skipif(os.geteuid() == 0, reason="root can read everything")
def test_scan_unreadable_file(tmp_path):
    _write(tmp_path, "Good.java", "int a;\n")
    locked = tmp_path / "Locked.java"
    locked.write_text("int b;\n")
    locked.chmod(0)
    result = scan_tree(tmp_path)
    assert [r.id for r in result.records] == ["Good.java"]
    assert [e[0] for e in result.errors] == ["Locked.java"]


def test_scan_read_failure_is_collected(tmp_path, monkeypatch):
    import progsize.loc_scanner as scanner

    _write(tmp_path, "Good.java", "int a;\n")
    _write(tmp_path, "Locked.java", "int b;\n")
    real = scanner.read_source

    def flaky(path, profile=None, ident=None):
        if ident == "Locked.java":
            raise PermissionError(13, "Permission denied", str(path))
        return real(path, profile, ident)

    monkeypatch.setattr(scanner, "read_source", flaky)
    result = scan_tree(tmp_path)
    assert [r.id for r in result.records] == ["Good.java"]
    assert result.errors[0][0] == "Locked.java" and "Permission denied" in result.errors[0][1]
