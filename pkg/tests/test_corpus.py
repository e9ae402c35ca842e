# -*- coding: utf-8 -*-
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import (
    NORMALIZATION_FIXTURES,
    RECORDS50,
    RECORDS50_DROPPED,
    RECORDS50_LABELED,
    RECORDS50_SURVIVING_DOCS,
    RECORDS50_VOCAB_SIZE,
    TOKENIZE_FIXTURES,
)
from conftest import DATA_DIR
import oracles

from typiclass import (
    Corpus,
    DataError,
    build_corpus,
    filter_short,
    iter_records,
    normalize_text,
    sample_distinct,
    tokenize,
)
from typiclass.labels import CATEGORIES, CATEGORY_GROUP, GROUPS, CategoryLabel


class TestLabels:
    def test_thirteen_categories_in_three_groups(self):
        assert len(CATEGORIES) == 13
        assert set(CATEGORY_GROUP.values()) == set(GROUPS)
        assert CategoryLabel.parse("methods").group == "pbc"
        assert CategoryLabel.parse("positive_outcomes").group == "attitude"
        assert CategoryLabel.parse("descriptive_norms").group == "subjective_norm"

    def test_unknown_category_rejected(self):
        with pytest.raises(DataError):
            CategoryLabel.parse("approval_of_robots")

    def test_label_equality_and_str(self):
        assert CategoryLabel.parse("ease") == CategoryLabel.parse(" ease ")
        assert str(CategoryLabel.parse("ease")) == "ease"


class TestNormalize:
    @pytest.mark.parametrize("raw,expected", NORMALIZATION_FIXTURES)
    def test_fixtures_exact(self, raw, expected):
        assert normalize_text(raw) == expected

    @pytest.mark.parametrize("raw,expected", NORMALIZATION_FIXTURES)
    def test_idempotent_on_fixtures(self, raw, expected):
        assert normalize_text(expected) == expected

    @settings(max_examples=200)
    @given(st.text(max_size=120))
    def test_idempotent_anywhere(self, raw):
        once = normalize_text(raw)
        assert normalize_text(once) == once


class TestTokenize:
    @pytest.mark.parametrize("text,expected", TOKENIZE_FIXTURES)
    def test_fixtures_exact(self, text, expected):
        assert tokenize(text) == expected

    @settings(max_examples=100)
    @given(st.text(max_size=80))
    def test_agrees_with_scanning_oracle(self, text):
        assert tokenize(text) == oracles.oracle_tokens(text)


class TestFilterShort:
    @pytest.mark.parametrize(
        "n,keep", [(0, False), (1, False), (4, False), (5, True), (6, True)]
    )
    def test_boundary(self, n, keep):
        assert filter_short(["w"] * n) is keep

    def test_custom_minimum(self):
        assert filter_short(["w"] * 3, min_tokens=3)
        assert not filter_short(["w"] * 2, min_tokens=3)


class TestBuildCorpus:
    def test_short_record_dropped(self):
        records = [
            ("a", "one two three four five", None),
            ("b", "tiny", None),
            ("c", "alpha beta gamma delta epsilon zeta", None),
        ]
        corpus = build_corpus(records)
        assert [d.id for d in corpus.documents] == ["a", "c"]

    def test_min_token_freq_prunes_vocab_and_documents(self):
        records = [
            ("a", "common common common common rare1", None),
            ("b", "common common common common common", None),
        ]
        corpus = build_corpus(records, min_token_freq=2)
        assert "rare1" not in corpus.vocabulary
        assert "common" in corpus.vocabulary
        # doc a lost rare1 but still has five tokens? no: four -> dropped
        assert [d.id for d in corpus.documents] == ["b"]

    def test_no_document_below_min_tokens(self):
        corpus = build_corpus(iter_records(DATA_DIR / RECORDS50), min_token_freq=2)
        assert all(len(d.tokens) >= 5 for d in corpus.documents)

    def test_duplicate_id_rejected(self):
        records = [
            ("a", "one two three four five", None),
            ("a", "six seven eight nine ten", None),
        ]
        with pytest.raises(DataError, match="duplicate id"):
            build_corpus(records)

    def test_malformed_record_reports_index(self):
        with pytest.raises(DataError, match="record 1"):
            build_corpus([("a", "one two three four five", None), ("b",)])

    def test_token_ids_dense_and_bijective(self):
        corpus = build_corpus(iter_records(DATA_DIR / RECORDS50))
        vocab = corpus.vocabulary
        assert len(vocab.id_to_token) == len(vocab.token_to_id)
        for idx, token in enumerate(vocab.id_to_token):
            assert vocab.token_to_id[token] == idx
        for doc in corpus.documents:
            assert all(0 <= t < len(vocab) for t in doc.tokens)

    def test_fixture_counts_match_independent_recount(self):
        corpus = build_corpus(iter_records(DATA_DIR / RECORDS50))
        assert len(corpus) == RECORDS50_SURVIVING_DOCS
        assert len(corpus.vocabulary) == RECORDS50_VOCAB_SIZE
        assert len(corpus.labeled_ids) == RECORDS50_LABELED
        kept = {d.id for d in corpus.documents}
        assert sorted(set(f"r{i:02d}" for i in range(1, 51)) - kept) == RECORDS50_DROPPED
        survivors, vocab = oracles.recount_fixture(DATA_DIR / RECORDS50)
        assert len(survivors) == RECORDS50_SURVIVING_DOCS
        assert vocab == set(corpus.vocabulary.id_to_token)

    def test_document_frequency_counts_documents(self):
        records = [
            ("a", "apple apple pear plum cherry", None),
            ("b", "apple fig pear plum cherry", None),
        ]
        corpus = build_corpus(records)
        vocab = corpus.vocabulary
        assert vocab.document_frequency[vocab.id("apple")] == 2
        assert vocab.document_frequency[vocab.id("fig")] == 1


class TestSerialization:
    def test_round_trip(self, tmp_path):
        corpus = build_corpus(iter_records(DATA_DIR / RECORDS50))
        path = tmp_path / "corpus.json"
        corpus.save(path)
        loaded = Corpus.load(path)
        assert len(loaded) == len(corpus)
        assert loaded.vocabulary.id_to_token == corpus.vocabulary.id_to_token
        for a, b in zip(loaded.documents, corpus.documents):
            assert (a.id, a.normalized_text, a.tokens, a.gold_label) == (
                b.id, b.normalized_text, b.tokens, b.gold_label,
            )

    def test_byte_identical_rebuild(self, tmp_path):
        p1, p2 = tmp_path / "c1.json", tmp_path / "c2.json"
        build_corpus(iter_records(DATA_DIR / RECORDS50)).save(p1)
        build_corpus(iter_records(DATA_DIR / RECORDS50)).save(p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_rejects_wrong_format(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"format": "something-else"}))
        with pytest.raises(DataError):
            Corpus.load(path)


class TestIterRecords:
    def test_jsonl(self, tmp_path):
        path = tmp_path / "r.jsonl"
        path.write_text(
            '{"id": "a", "text": "hello there"}\n'
            '{"id": "b", "text": "again", "label": "methods"}\n'
        )
        assert list(iter_records(path)) == [
            ("a", "hello there", None),
            ("b", "again", "methods"),
        ]

    def test_jsonl_malformed_line_numbered(self, tmp_path):
        path = tmp_path / "r.jsonl"
        path.write_text('{"id": "a", "text": "x"}\n{oops\n')
        with pytest.raises(DataError, match=":2"):
            list(iter_records(path))

    def test_tsv_field_count_checked(self, tmp_path):
        path = tmp_path / "r.tsv"
        path.write_text("a\tb\tc\td\n")
        with pytest.raises(DataError, match="expected 2 or 3"):
            list(iter_records(path))

    def test_unknown_label_rejected_at_build(self, tmp_path):
        path = tmp_path / "r.tsv"
        path.write_text("a\tone two three four five\tnot_a_category\n")
        with pytest.raises(DataError, match="unknown category"):
            build_corpus(iter_records(path))


class TestSampleDistinct:
    def _corpus(self):
        records = [(f"d{i}", f"word{i} alpha beta gamma delta", None) for i in range(10)]
        # three duplicate texts of d0
        for j, rid in enumerate(["e1", "e2", "e3"]):
            records.append((rid, "word0 alpha beta gamma delta", None))
        return build_corpus(records)

    def test_dedup_forces_distinct_texts(self):
        corpus = self._corpus()
        sampled = sample_distinct(corpus, 7, seed=1)
        texts = [d.normalized_text for d in sampled.documents]
        assert len(sampled) == 7
        assert len(set(texts)) == 7

    def test_deterministic(self):
        corpus = self._corpus()
        a = sample_distinct(corpus, 6, seed=9)
        b = sample_distinct(corpus, 6, seed=9)
        assert [d.id for d in a.documents] == [d.id for d in b.documents]

    def test_n_zero_gives_empty_corpus(self):
        assert len(sample_distinct(self._corpus(), 0, seed=0)) == 0

    def test_insufficient_distinct_raises(self):
        corpus = self._corpus()  # 10 distinct texts
        with pytest.raises(DataError, match="only 10 distinct"):
            sample_distinct(corpus, 11, seed=0)

    def test_no_duplicate_texts_survive_any_sample(self):
        corpus = self._corpus()
        for seed in range(5):
            sampled = sample_distinct(corpus, 8, seed=seed)
            texts = [d.normalized_text for d in sampled.documents]
            assert len(texts) == len(set(texts))
