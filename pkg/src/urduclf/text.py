"""Rule-based Urdu text processing.

normalize -> split sentences -> tokenize -> lemmatize -> drop stop words.
Every step is a pure function; :class:`Preprocessor` bundles them.
"""

from __future__ import annotations

import os
import re
import string
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .corpus import Corpus

DIACRITICS = "".join(chr(c) for c in range(0x064B, 0x0653)) + "\u0670"
_DIACRITICS_RE = re.compile(f"[{DIACRITICS}]")
# Arabic Presentation Forms-A and -B
_PRESENTATION_RE = re.compile("[\ufb50-\ufdff\ufe70-\ufefe]")

SENTENCE_TERMINATORS = "\u06d4\u061f!?."
_SENTENCE_RE = re.compile(f"[{re.escape(SENTENCE_TERMINATORS)}]+|\\n[ \\t\\r\\f\\v]*\\n")

QUOTES = "\"'`\u2018\u2019\u201a\u201c\u201d\u201e\u00ab\u00bb\u2039\u203a"
BRACKETS = "()[]{}<>\ufd3e\ufd3f\u3008\u3009"
URDU_PUNCT = "\u060c\u061b\u06d4\u061f\u066a\u066b\u066c\u066d"
SEPARATORS = string.punctuation + QUOTES + BRACKETS + URDU_PUNCT
ZWNJ = "\u200c"
_TOKEN_SPLIT_RE = re.compile(f"[\\s{re.escape(SEPARATORS)}]+")


@dataclass(frozen=True)
class TokenizerConfig:
    strip_diacritics: bool = True
    keep_digits: bool = True
    lowercase_ascii: bool = True


DEFAULT_CONFIG = TokenizerConfig()


def _unpresent(m: re.Match) -> str:
    return unicodedata.normalize("NFKC", m.group(0))


def _lower_ascii(text: str) -> str:
    return text.translate(_ASCII_LOWER)


_ASCII_LOWER = {c: c + 32 for c in range(ord("A"), ord("Z") + 1)}


def normalize_text(text: str, config: TokenizerConfig = DEFAULT_CONFIG) -> str:
    """NFC-normalize ``text``, fold presentation forms and optionally strip harakat.

    Extended Arabic-Indic (Urdu) digits are left untouched.
    """
    text = _PRESENTATION_RE.sub(_unpresent, text)
    text = unicodedata.normalize("NFC", text)
    if config.strip_diacritics:
        text = unicodedata.normalize("NFC", _DIACRITICS_RE.sub("", text))
    if config.lowercase_ascii:
        text = _lower_ascii(text)
    return text


def split_sentences(text: str) -> list[str]:
    """Split on Urdu/Latin sentence terminators and blank lines."""
    parts = (p.strip() for p in _SENTENCE_RE.split(text))
    return [p for p in parts if p]


def _is_digits(tok: str) -> bool:
    return all(unicodedata.category(ch) == "Nd" for ch in tok)


def tokenize(sentence: str, config: TokenizerConfig = DEFAULT_CONFIG) -> list[str]:
    """Split a sentence on whitespace and punctuation.

    ZWNJ (U+200C) is not a separator, so joined word forms stay one token.
    """
    tokens = [t for t in _TOKEN_SPLIT_RE.split(sentence) if t and t != ZWNJ]
    if not config.keep_digits:
        tokens = [t for t in tokens if not _is_digits(t)]
    return tokens


class LemmaLexicon(Mapping[str, str]):
    """Exact-match surface form -> base form table."""

    def __init__(self, entries: Mapping[str, str] | Iterable[tuple[str, str]] = ()):
        pairs = entries.items() if isinstance(entries, Mapping) else entries
        table: dict[str, str] = {}
        for surface, lemma in pairs:
            if not surface or not lemma:
                raise ValueError("lexicon entries must be non-empty")
            if surface in table and table[surface] != lemma:
                raise ValueError(f"conflicting lemmas for {surface!r}")
            table[surface] = lemma
        self._table = table

    def __getitem__(self, key: str) -> str:
        return self._table[key]

    def __iter__(self):
        return iter(self._table)

    def __len__(self) -> int:
        return len(self._table)

    @property
    def n_lemmas(self) -> int:
        return len(set(self._table.values()))

    @classmethod
    def load(cls, path: str | os.PathLike, config: TokenizerConfig = DEFAULT_CONFIG) -> "LemmaLexicon":
        """Read ``surface<TAB>lemma`` lines; both sides are normalized on load."""
        pairs = []
        with open(path, encoding="utf-8-sig") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\r\n")
                if not line.strip() or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ValueError(f"{path}:{lineno}: expected surface<TAB>lemma")
                pairs.append(tuple(normalize_text(p.strip(), config) for p in parts))
        return cls(pairs)


class StopList(frozenset):
    """Set of stop tokens, stored in normalized form."""

    def __new__(cls, tokens: Iterable[str] = (), config: TokenizerConfig = DEFAULT_CONFIG):
        tokens = list(tokens)
        for tok in tokens:
            if normalize_text(tok, config) != tok:
                raise ValueError(f"stop word {tok!r} is not normalized")
        return super().__new__(cls, tokens)

    @classmethod
    def load(cls, path: str | os.PathLike, config: TokenizerConfig = DEFAULT_CONFIG) -> "StopList":
        with open(path, encoding="utf-8-sig") as fh:
            tokens = [normalize_text(line.strip(), config) for line in fh]
        return cls((t for t in tokens if t and not t.startswith("#")), config)


def lemmatize(tokens: Iterable[str], lexicon: Mapping[str, str]) -> list[str]:
    return [lexicon.get(t, t) for t in tokens]


def filter_stopwords(tokens: Iterable[str], stops: Iterable[str]) -> list[str]:
    if not isinstance(stops, (set, frozenset)):
        stops = frozenset(stops)
    return [t for t in tokens if t not in stops]


def frequency_profile(corpus: Corpus, top_n: int) -> list[tuple[str, int]]:
    """The ``top_n`` most frequent tokens, ties broken by term.

    This is the candidate list one curates a stop-word list from.
    """
    if top_n < 1:
        raise ValueError("top_n must be positive")
    if not corpus.is_tokenized:
        raise ValueError("corpus is not tokenized")
    counts = Counter(t for doc in corpus for t in doc.token_seq)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:top_n]


@dataclass(frozen=True)
class Preprocessor:
    config: TokenizerConfig = DEFAULT_CONFIG
    lexicon: LemmaLexicon = field(default_factory=LemmaLexicon)
    stops: StopList = field(default_factory=StopList)

    def __call__(self, text: str) -> list[str]:
        text = normalize_text(text, self.config)
        tokens: list[str] = []
        for sentence in split_sentences(text):
            tokens.extend(tokenize(sentence, self.config))
        return filter_stopwords(lemmatize(tokens, self.lexicon), self.stops)

    def sentences(self, text: str) -> list[str]:
        return split_sentences(normalize_text(text, self.config))

    def process_corpus(self, corpus: Corpus) -> Corpus:
        return Corpus([doc.with_tokens(self(doc.raw_text)) for doc in corpus])
