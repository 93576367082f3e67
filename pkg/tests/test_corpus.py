import pytest
from hypothesis import given, strategies as st

from resume_rater.corpus import (
    RawDocument,
    Vocabulary,
    build_vocabulary,
    load_wordlist,
    read_corpus,
    to_bow,
    tokenize,
    tokenize_document,
)


def test_tokenize_example(stopwords):
    assert "that" in stopwords
    assert tokenize("Built RESTful APIs that served data", stopwords) == [
        "built", "restful", "apis", "served", "data",
    ]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_strips_punctuation():
    assert tokenize("SQL, MySQL.") == ["sql", "mysql"]


@pytest.mark.parametrize(
    "text, expected",
    [
        ("C++, C# and (Java)", ["c++", "c#", "and", "java"]),
        ("node.js ci/cd", ["node.js", "ci/cd"]),
        ("-- ... !!!", []),
        ("Tabs\tand\nnewlines too", ["tabs", "and", "newlines", "too"]),
    ],
)
def test_tokenize_rules(text, expected):
    assert tokenize(text) == expected


def test_tokenize_document():
    doc = RawDocument("a", "a.txt", "Python and SQL")
    assert tokenize_document(doc, {"and"}).tokens == ["python", "sql"]


@given(st.text(), st.sets(st.sampled_from(["the", "a", "of", "and", "x", "sql"])))
def test_tokenize_idempotent(text, stop):
    once = tokenize(text, stop)
    assert tokenize(" ".join(once), stop) == once


@given(st.text(alphabet=st.characters(blacklist_categories=["Cs"]), max_size=200))
def test_tokens_well_formed(text):
    stop = {"the", "and", "of"}
    for tok in tokenize(text, stop):
        assert tok
        assert tok == tok.lower()
        assert not any(ch.isspace() for ch in tok)
        assert tok not in stop


def test_build_vocabulary_examples():
    docs = [["a", "b"], ["b", "c"]]
    assert build_vocabulary(docs, 1).terms == ("a", "b", "c")
    assert build_vocabulary(docs, 2).terms == ("b",)
    assert len(build_vocabulary([], 1)) == 0


def test_build_vocabulary_rejects_bad_min_count():
    with pytest.raises(ValueError):
        build_vocabulary([["a"]], 0)


def test_vocabulary_index_is_bijective():
    vocab = build_vocabulary([["x", "y", "x", "z"]])
    assert [vocab.index[t] for t in vocab.terms] == list(range(len(vocab)))


def test_vocabulary_rejects_duplicates():
    with pytest.raises(ValueError):
        Vocabulary(("a", "a"))


def test_to_bow_examples():
    vocab = Vocabulary(("a", "b"))
    assert to_bow(["b", "a", "z"], vocab) == [1, 0]
    assert to_bow([], vocab) == []
    assert to_bow(["a", "a"], Vocabulary(("a",))) == [0, 0]


@given(st.lists(st.lists(st.sampled_from("abcdefg"), max_size=8), min_size=1, max_size=6),
       st.integers(1, 3))
def test_vocabulary_round_trip(docs, min_count):
    vocab = build_vocabulary(docs, min_count)
    for doc in docs:
        for i in to_bow(doc, vocab):
            assert vocab.terms[i] in doc


def test_load_wordlist_skips_comments(tmp_path):
    p = tmp_path / "stop.txt"
    p.write_text("# comment\nThe\n\n  and  \n", encoding="utf-8")
    assert load_wordlist(p) == {"the", "and"}


def test_read_corpus_orders_by_stem(tmp_path):
    (tmp_path / "b.txt").write_text("two", encoding="utf-8")
    (tmp_path / "a.txt").write_text("one", encoding="utf-8")
    (tmp_path / "skip.md").write_text("x", encoding="utf-8")
    docs = read_corpus(tmp_path)
    assert [d.id for d in docs] == ["a", "b"]
    assert docs[0].filename == "a.txt"
