from __future__ import annotations

import io
import zipfile

import pytest
from hypothesis import given
from hypothesis import strategies as st

from progsize.errors import BadRow, DuplicateId, FormatMismatch, MissingDefectData, MissingHeader
from progsize.ingest import (
    Dataset,
    ProgramRecord,
    export_canonical_csv,
    import_eclipse_dataset,
    parse_canonical_csv,
    parse_eclipse_csv,
)


def test_header_only():
    ds = parse_canonical_csv("id,loc,pre_defects,post_defects\n")
    assert len(ds) == 0


def test_row_mapping():
    ds = parse_canonical_csv("id,loc,pre_defects,post_defects\na.java,51,2,0\n")
    assert ds.records == (ProgramRecord("a.java", 51, 2, 0),)


def test_size_only_columns():
    ds = parse_canonical_csv("id,loc\nx,3\ny,9\n")
    assert ds.sizes == [3, 9]
    assert not ds.has_defects("pre")
    with pytest.raises(MissingDefectData):
        ds.require_defects("post")


def test_empty_defect_cells_are_absent():
    ds = parse_canonical_csv("id,loc,pre_defects,post_defects\na,5,,\nb,6,1,\n")
    assert ds.records[0].pre_defects is None and ds.records[1].pre_defects == 1
    assert not ds.has_defects("pre")


@pytest.mark.parametrize(
    "row, line",
    [("b.java,0,,", 2), ("b.java,-3,,", 2), ("b.java,x,,", 2), ("b.java,3,-1,", 2), ("b.java,3", 2)],
)
def test_bad_rows(row, line):
    with pytest.raises(BadRow) as info:
        parse_canonical_csv(f"id,loc,pre_defects,post_defects\n{row}\n")
    assert info.value.line == line


def test_bad_row_position_counts_physical_lines():
    with pytest.raises(BadRow) as info:
        parse_canonical_csv("id,loc\na,1\nb,2\nc,0\n")
    assert info.value.line == 4


def test_missing_header():
    with pytest.raises(MissingHeader):
        parse_canonical_csv("")
    with pytest.raises(MissingHeader):
        parse_canonical_csv("a.java,51,2,0\n")


def test_duplicate_id():
    with pytest.raises(DuplicateId):
        parse_canonical_csv("id,loc\na,1\na,2\n")


records = st.lists(
    st.builds(
        ProgramRecord,
        id=st.text(alphabet=st.characters(blacklist_categories=("Cs", "Cc")), min_size=1, max_size=12).filter(
            lambda s: s.strip() == s and s != "" and not s.startswith("﻿")
        ),
        loc=st.integers(1, 10**6),
        pre_defects=st.none() | st.integers(0, 500),
        post_defects=st.none() | st.integers(0, 500),
    ),
    unique_by=lambda r: r.id,
    max_size=30,
)


@given(records)
def test_canonical_round_trip(recs):
    ds = Dataset("d", "1", tuple(recs))
    text = export_canonical_csv(ds)
    again = parse_canonical_csv(text, "d", "1")
    assert again == ds
    assert export_canonical_csv(again) == text


# --- Eclipse layout -----------------------------------------------------------

ECLIPSE_HEADER = "plugin;filename;pre;post;ACD;FOUT_avg;MLOC_sum;TLOC;VG_max"


def _eclipse_text(rows):
    return ECLIPSE_HEADER + "\n" + "".join(
        f"org.eclipse.core;{name};{pre};{post};0;1.5;10;{tloc};3\n" for name, tloc, pre, post in rows
    )


def test_eclipse_mapping():
    text = _eclipse_text([("org/eclipse/A.java", 51, 2, 0), ("org/eclipse/B.java", 7, 0, 1)])
    ds = parse_eclipse_csv(text, "3.0")
    assert ds.version_label == "3.0"
    assert ds.records == (
        ProgramRecord("org/eclipse/A.java", 51, 2, 0),
        ProgramRecord("org/eclipse/B.java", 7, 0, 1),
    )


def test_eclipse_truncated_file():
    text = _eclipse_text([("A.java", 51, 2, 0), ("B.java", 7, 0, 1)])
    truncated = text[: text.rindex(";10;")]
    with pytest.raises(FormatMismatch, match="line 3"):
        parse_eclipse_csv(truncated)


def test_eclipse_missing_column_is_named():
    with pytest.raises(FormatMismatch, match="TLOC"):
        parse_eclipse_csv("plugin;filename;pre;post\nx;A.java;1;0\n")


def test_eclipse_unparseable_value_is_named():
    text = _eclipse_text([("A.java", "lots", 2, 0)])
    with pytest.raises(FormatMismatch, match="TLOC.*'lots'"):
        parse_eclipse_csv(text)


def test_eclipse_from_directory_and_zip(tmp_path):
    text = _eclipse_text([("A.java", 51, 2, 0), ("B.java", 7, 0, 1), ("C.java", 3, 0, 0)])
    (tmp_path / "files-2.1.csv").write_text(text)
    ds = import_eclipse_dataset(tmp_path, "2.1")
    assert len(ds) == 3

    archive = tmp_path / "eclipse.zip"
    with zipfile.ZipFile(archive, "w") as zf:
        zf.writestr("eclipse/files-2.1.csv", text)
        zf.writestr("eclipse/packages-2.1.csv", "irrelevant")
    assert import_eclipse_dataset(archive, "2.1") == ds

    with pytest.raises(FormatMismatch):
        import_eclipse_dataset(tmp_path, "9.9")


def test_imported_records_satisfy_invariants(tmp_path):
    bad = _eclipse_text([("A.java", 0, 1, 1)])
    with pytest.raises(FormatMismatch):
        parse_eclipse_csv(bad)
    stream = io.StringIO(export_canonical_csv(parse_eclipse_csv(_eclipse_text([("A.java", 4, 1, 1)]))))
    assert parse_canonical_csv(stream).records[0] == ProgramRecord("A.java", 4, 1, 1)
