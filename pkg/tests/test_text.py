import pytest
from hypothesis import given
from hypothesis import strategies as st

from urduclf.corpus import load_corpus
from urduclf.text import (
    LemmaLexicon,
    Preprocessor,
    StopList,
    TokenizerConfig,
    filter_stopwords,
    frequency_profile,
    lemmatize,
    normalize_text,
    split_sentences,
    tokenize,
)

ZWNJ = "\u200c"


def test_normalize_identity_on_clean_text():
    text = "یہ کتاب ہے"
    assert normalize_text(text) == text


def test_strip_kasra():
    assert normalize_text("کِتاب") == "کتاب"
    assert normalize_text("کِتاب", TokenizerConfig(strip_diacritics=False)) == "کِتاب"


def test_superscript_alef_stripped():
    assert normalize_text("رحمٰن") == "رحمن"


def test_presentation_forms_folded():
    # isolated alef + initial lam presentation forms
    assert normalize_text("\ufe8d\ufedf") == "ال"


def test_urdu_digits_preserved():
    assert normalize_text("۱۲۳") == "۱۲۳"


def test_ascii_lowercase_flag():
    assert normalize_text("BBC اردو") == "bbc اردو"
    assert normalize_text("BBC", TokenizerConfig(lowercase_ascii=False)) == "BBC"


@given(st.text(alphabet=st.characters(min_codepoint=0x20, max_codepoint=0xFEFF)))
def test_normalize_idempotent(text):
    once = normalize_text(text)
    assert normalize_text(once) == once


@given(st.text(alphabet="کتابیہےوگِاُ۔؟ َِٰﺍﻟ"))
def test_normalize_idempotent_urdu(text):
    once = normalize_text(text)
    assert normalize_text(once) == once


def test_split_sentences():
    assert split_sentences("یہ کتاب ہے۔ وہ گیا؟") == ["یہ کتاب ہے", "وہ گیا"]
    assert split_sentences("کوئی اختتام نہیں") == ["کوئی اختتام نہیں"]
    assert split_sentences("۔۔۔") == []
    assert split_sentences("پہلا\n\nدوسرا") == ["پہلا", "دوسرا"]


def test_tokenize():
    assert tokenize("یہ کتاب ہے") == ["یہ", "کتاب", "ہے"]
    assert tokenize("قیمت، 500 روپے", TokenizerConfig(keep_digits=False)) == ["قیمت", "روپے"]
    assert tokenize("قیمت، 500 روپے") == ["قیمت", "500", "روپے"]
    assert tokenize("«خبر» (اہم)؛ ہاں") == ["خبر", "اہم", "ہاں"]


def test_zwnj_kept_inside_token():
    word = f"نی{ZWNJ}ک"
    assert tokenize(f"{word} کام") == [word, "کام"]


def test_urdu_digits_dropped_when_requested():
    assert tokenize("سال ۲۰۲۰", TokenizerConfig(keep_digits=False)) == ["سال"]


def test_lemmatize():
    assert lemmatize(["کتابیں", "گھر"], LemmaLexicon()) == ["کتابیں", "گھر"]
    lex = LemmaLexicon({"کتابیں": "کتاب"})
    assert lemmatize(["کتابیں", "گھر"], lex) == ["کتاب", "گھر"]


def test_lexicon_load(tmp_path):
    path = tmp_path / "lex.tsv"
    path.write_text("# surface\tlemma\nکتابیں\tکتاب\nکِتابوں\tکتاب\n", encoding="utf-8")
    lex = LemmaLexicon.load(path)
    assert lex["کتابوں"] == "کتاب"  # surface normalized on load
    assert len(lex) == 2 and lex.n_lemmas == 1


def test_lexicon_rejects_conflicts():
    with pytest.raises(ValueError):
        LemmaLexicon([("a", "b"), ("a", "c")])
    with pytest.raises(ValueError):
        LemmaLexicon([("a", "")])


def test_filter_stopwords():
    toks = ["یہ", "کتاب", "ہے"]
    assert filter_stopwords(toks, StopList()) == toks
    assert filter_stopwords(toks, StopList(toks)) == []
    stops = StopList(["ہے"])
    once = filter_stopwords(toks, stops)
    assert once == ["یہ", "کتاب"]
    assert filter_stopwords(once, stops) == once


def test_stoplist_load_normalizes(tmp_path):
    path = tmp_path / "stop.txt"
    path.write_text("ہے\nکِی\n\n", encoding="utf-8")
    stops = StopList.load(path)
    assert stops == {"ہے", "کی"}
    assert all(normalize_text(s) == s for s in stops)


def test_stoplist_rejects_unnormalized():
    with pytest.raises(ValueError):
        StopList(["کِی"])


def test_frequency_profile(urdu_tree):
    corpus = Preprocessor().process_corpus(load_corpus(urdu_tree))
    prof = frequency_profile(corpus, 3)
    counts = [n for _, n in prof]
    assert counts == sorted(counts, reverse=True)
    assert len(frequency_profile(corpus, 10_000)) == len({t for d in corpus for t in d.token_seq})
    with pytest.raises(ValueError):
        frequency_profile(corpus, 0)


def test_frequency_profile_ties(tmp_path):
    (tmp_path / "a").mkdir()
    (tmp_path / "a" / "1.txt").write_text("ب ا ب ا ج", encoding="utf-8")
    corpus = Preprocessor().process_corpus(load_corpus(tmp_path))
    assert frequency_profile(corpus, 5) == [("ا", 2), ("ب", 2), ("ج", 1)]


def test_frequency_profile_single_term(tmp_path):
    (tmp_path / "a").mkdir()
    (tmp_path / "a" / "1.txt").write_text("لفظ لفظ لفظ", encoding="utf-8")
    corpus = Preprocessor().process_corpus(load_corpus(tmp_path))
    assert frequency_profile(corpus, 5) == [("لفظ", 3)]


def test_lemmatization_never_adds_terms(urdu_tree):
    corpus = load_corpus(urdu_tree)
    plain = Preprocessor().process_corpus(corpus)
    lex = LemmaLexicon({"کھلاڑی": "کھیل", "میچ": "کھیل", "قیمت": "دام"})
    lemmatized = Preprocessor(lexicon=lex).process_corpus(corpus)
    vocab = lambda c: {t for d in c for t in d.token_seq}
    assert plain.token_count() == lemmatized.token_count()
    assert len(vocab(lemmatized)) <= len(vocab(plain))


def test_pipeline_deterministic(urdu_tree):
    corpus = load_corpus(urdu_tree)
    pre = Preprocessor(stops=StopList(["ہے", "کا", "کی", "نے"]))
    a, b = pre.process_corpus(corpus), pre.process_corpus(corpus)
    assert [d.token_seq for d in a] == [d.token_seq for d in b]
    assert all("ہے" not in d.token_seq for d in a)
