"""Labeled document collections: loading, validation and stratified splitting."""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

BOM = "\ufeff"

FORMATS = ("dir-per-class", "manifest-tsv")


class CorpusError(ValueError):
    """Raised when a corpus cannot be loaded or split."""


@dataclass(frozen=True)
class Document:
    id: str
    class_label: str
    raw_text: str
    token_seq: tuple[str, ...] | None = None

    def with_tokens(self, tokens: Iterable[str]) -> "Document":
        return dataclasses.replace(self, token_seq=tuple(tokens))


class Corpus:
    """An ordered, immutable collection of documents.

    ``classes`` is the sorted set of labels that occur in ``documents``.
    """

    __slots__ = ("_documents", "_classes")

    def __init__(self, documents: Sequence[Document]):
        docs = tuple(documents)
        seen: set[str] = set()
        for doc in docs:
            if doc.id in seen:
                raise CorpusError(f"duplicate document id: {doc.id!r}")
            seen.add(doc.id)
            if not doc.class_label:
                raise CorpusError(f"document {doc.id!r} has an empty class label")
            if not doc.raw_text.strip():
                raise CorpusError(f"document {doc.id!r} is empty")
        self._documents = docs
        self._classes = tuple(sorted({d.class_label for d in docs}))

    @property
    def documents(self) -> tuple[Document, ...]:
        return self._documents

    @property
    def classes(self) -> tuple[str, ...]:
        return self._classes

    @property
    def labels(self) -> list[str]:
        return [d.class_label for d in self._documents]

    @property
    def ids(self) -> list[str]:
        return [d.id for d in self._documents]

    @property
    def is_tokenized(self) -> bool:
        return all(d.token_seq is not None for d in self._documents)

    def class_sizes(self) -> dict[str, int]:
        sizes = dict.fromkeys(self._classes, 0)
        for d in self._documents:
            sizes[d.class_label] += 1
        return sizes

    def token_count(self) -> int:
        """Number of tokens across all documents (0 if not tokenized)."""
        return sum(len(d.token_seq or ()) for d in self._documents)

    def __len__(self) -> int:
        return len(self._documents)

    def __iter__(self):
        return iter(self._documents)

    def __getitem__(self, i):
        return self._documents[i]

    def __repr__(self) -> str:
        return f"Corpus({len(self)} documents, {len(self._classes)} classes)"


@dataclass(frozen=True)
class SplitResult:
    train: Corpus
    test: Corpus
    seed: int
    train_fraction: float


def _read_text(path: Path) -> str:
    try:
        text = path.read_bytes().decode("utf-8", errors="strict")
    except UnicodeDecodeError as exc:
        raise CorpusError(f"invalid UTF-8 in {path}: {exc}") from None
    if text.startswith(BOM):
        text = text[1:]
    if not text.strip():
        raise CorpusError(f"empty document: {path}")
    return text


def _load_dir_per_class(root: Path) -> list[Document]:
    class_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    if not class_dirs:
        raise CorpusError(f"zero classes under {root}")
    docs = []
    for cdir in class_dirs:
        files = sorted(p for p in cdir.iterdir() if p.is_file() and not p.name.startswith("."))
        if not files:
            raise CorpusError(f"zero documents in class {cdir.name!r}")
        for f in files:
            docs.append(Document(f"{cdir.name}/{f.name}", cdir.name, _read_text(f)))
    return docs


def _load_manifest(manifest: Path) -> list[Document]:
    base = manifest.parent
    rows = []
    with open(manifest, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if lineno == 1 and line.startswith(BOM):
                line = line[1:]
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3 or not all(parts):
                raise CorpusError(f"{manifest}:{lineno}: expected id<TAB>class<TAB>path")
            rows.append(parts)
    if not rows:
        raise CorpusError(f"zero classes in manifest {manifest}")
    rows.sort(key=lambda r: (r[1], r[2]))
    return [Document(doc_id, label, _read_text(base / rel)) for doc_id, label, rel in rows]


def load_corpus(root_path: str | os.PathLike, format: str = "dir-per-class") -> Corpus:
    """Load a corpus from a class-per-directory tree or a TSV manifest.

    Documents are ordered by (class, filename). Decoding is strict UTF-8 and a
    leading BOM is dropped.
    """
    root = Path(root_path)
    if not root.exists():
        raise CorpusError(f"no such path: {root}")
    if format == "dir-per-class":
        if not root.is_dir():
            raise CorpusError(f"not a directory: {root}")
        docs = _load_dir_per_class(root)
    elif format == "manifest-tsv":
        docs = _load_manifest(root)
    else:
        raise CorpusError(f"unknown corpus format {format!r}; expected one of {FORMATS}")
    return Corpus(docs)


def split_size(n: int, train_fraction: float) -> int:
    """Round-half-up of ``train_fraction * n``, clamped to [1, n - 1]."""
    k = math.floor(train_fraction * n + 0.5)
    return min(max(k, 1), n - 1)


def stratified_split(corpus: Corpus, train_fraction: float = 0.7, seed: int = 0) -> SplitResult:
    """Per-class seeded shuffle; the first ``split_size`` documents of each class train.

    The shuffle uses numpy's PCG64 generator seeded with ``seed``, which gives the
    same stream on every platform. Both halves keep the corpus order.
    """
    if not 0.0 < train_fraction < 1.0:
        raise CorpusError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if not 0 <= seed < 2**64:
        raise CorpusError("seed must be an unsigned 64-bit integer")
    by_class: dict[str, list[int]] = {c: [] for c in corpus.classes}
    for i, doc in enumerate(corpus):
        by_class[doc.class_label].append(i)
    rng = np.random.Generator(np.random.PCG64(seed))
    in_train = np.zeros(len(corpus), dtype=bool)
    for label in corpus.classes:
        idx = by_class[label]
        if len(idx) < 2:
            raise CorpusError(f"class {label!r} has fewer than 2 documents")
        order = rng.permutation(len(idx))
        k = split_size(len(idx), train_fraction)
        for j in order[:k]:
            in_train[idx[j]] = True
    docs = corpus.documents
    train = Corpus([d for d, t in zip(docs, in_train) if t])
    test = Corpus([d for d, t in zip(docs, in_train) if not t])
    return SplitResult(train, test, seed, train_fraction)
