import json

import pytest

from app.config import Config
from app.services.catalog import (
    CatalogFormatError,
    VerdictCache,
    batch,
    encode_revlex,
    filter_entries,
    parse_revlex,
    read_catalog,
    read_catalog_text,
    realizability_verdict,
    verdict_key,
)
from app.services.matroid import Matroid, SubsetEnumeration
from app.services.smoothness import UNDECIDED
from tests.conftest import catalog_file

SMALL = "2 4 3\n******\n# parallel pair\n0*****\n\n**0***\n"


# =============================================================================
# ENCODING
# =============================================================================

def test_all_bases_is_uniform():
    assert parse_revlex("******", 2, 4) == Matroid.uniform(2, 4)


def test_colex_position_zero_is_first_pair():
    Q = parse_revlex("0*****", 2, 4)
    assert not Q.is_basis([1, 2])
    assert Q.parallel_classes() == ((1, 2),)


def test_order_changes_meaning():
    # position 2 is {2,3} in colex and {1,4} in lex
    assert not parse_revlex("**0***", 2, 4, "colex").is_basis([2, 3])
    assert not parse_revlex("**0***", 2, 4, "lex").is_basis([1, 4])


def test_exchange_violation():
    with pytest.raises(CatalogFormatError):
        parse_revlex("*0000*", 2, 4)


@pytest.mark.parametrize("line", ["*****", "*******", "**x***"])
def test_malformed_lines(line):
    with pytest.raises(CatalogFormatError):
        parse_revlex(line, 2, 4)


def test_encode_inverts_parse(q_sing):
    for order in ("colex", "lex", "revlex"):
        text = encode_revlex(q_sing, order)
        assert len(text) == SubsetEnumeration(12, 3, order).size
        assert parse_revlex(text, 3, 12, order) == q_sing


# =============================================================================
# READING AND FILTERING
# =============================================================================

def test_header_supplies_shape():
    entries = read_catalog_text(SMALL)
    assert [(e.d, e.n, e.line) for e in entries] == [(2, 4, 2), (2, 4, 4), (2, 4, 6)]


def test_file_reading(tmp_path):
    path = tmp_path / "r2n04.txt"
    path.write_text(SMALL, encoding="utf-8")
    assert [e.encoding for e in read_catalog(path)] == ["******", "0*****", "**0***"]


def test_missing_header():
    with pytest.raises(CatalogFormatError):
        read_catalog_text("******\n")


def test_explicit_shape_without_header():
    assert len(read_catalog_text("******\n", d=2, n=4)) == 1


def test_header_must_agree_with_shape():
    assert len(read_catalog_text(SMALL, d=2, n=4)) == 3
    with pytest.raises(CatalogFormatError):
        read_catalog_text(SMALL, d=3, n=4)


def test_filter_counts():
    report = filter_entries(read_catalog_text(SMALL), ["simple", "connected"])
    assert report.counts == {"total": 3, "simple": 1, "connected": 1}
    assert [e.encoding for e in report.survivors] == ["******"]


def test_filter_empty_input():
    report = filter_entries([], ["simple"])
    assert report.counts == {"total": 0, "simple": 0}
    assert report.survivors == []


def test_unknown_stage():
    with pytest.raises(ValueError):
        filter_entries([], ["tidy"])


# =============================================================================
# VERDICTS
# =============================================================================

def test_verdict_of_uniform():
    assert realizability_verdict(Matroid.uniform(2, 4)) == "yes"


def test_verdict_cache_persists_decided_only(tmp_path):
    path = tmp_path / "verdicts.jsonl"
    cache = VerdictCache(path)
    cache.put(verdict_key(2, 4, "******"), "yes")
    cache.put(verdict_key(2, 4, "0*****"), UNDECIDED)
    assert len(cache) == 2

    reloaded = VerdictCache(path)
    assert reloaded.get(verdict_key(2, 4, "******")) == "yes"
    assert reloaded.get(verdict_key(2, 4, "0*****")) is None
    assert len(path.read_text().splitlines()) == 1


def test_verdict_cache_skips_bad_lines(tmp_path):
    path = tmp_path / "verdicts.jsonl"
    path.write_text("not json\n" + json.dumps({"key": "k", "realizable": "no"}) + "\n")
    assert VerdictCache(path).get("k") == "no"


def test_batch_realizability(tmp_path):
    config = Config(workers=1, cache_path=tmp_path / "verdicts.jsonl")
    report = batch(read_catalog_text(SMALL), ["simple", "realizable"], config)
    assert report.counts == {"total": 3, "simple": 1, "realizable": 1, "undecided": 0}
    assert report.summaries == [{"d": 2, "n": 4, "line": 2, "encoding": "******", "realizable": "yes"}]

    again = batch(read_catalog_text(SMALL), ["simple", "realizable"], config)
    assert again.counts == report.counts


def test_batch_without_realizability():
    report = batch(read_catalog_text(SMALL), ["connected"], Config(workers=1, cache_path=None))
    assert "realizable" not in report.counts
    assert len(report.summaries) == 3


# =============================================================================
# PUBLIC DATABASE COUNTS
# =============================================================================

@pytest.mark.slow
def test_rank_3_on_9(tmp_path):
    entries = read_catalog(catalog_file(3, 9), d=3, n=9)
    config = Config(cache_path=tmp_path / "verdicts.jsonl")
    report = batch(entries, ["simple", "realizable"], config)
    assert report.counts["simple"] == 383
    assert report.counts["realizable"] == 370
    assert report.counts["undecided"] == 0


@pytest.mark.slow
def test_rank_3_on_10():
    entries = read_catalog(catalog_file(3, 10), d=3, n=10)
    report = filter_entries(entries, ["simple", "three_lines"])
    assert report.counts["simple"] == 5249
    assert report.counts["three_lines"] == 151


@pytest.mark.slow
def test_rank_4_on_8(tmp_path):
    entries = read_catalog(catalog_file(4, 8), d=4, n=8)
    config = Config(cache_path=tmp_path / "verdicts.jsonl")
    report = batch(entries, ["simple", "connected", "four_planes", "realizable"], config)
    assert report.counts["connected"] == 592
    assert report.counts["four_planes"] == 92
    assert report.counts["realizable"] == 66
