"""Planted-signal corpora with known ground truth.

Every document of class ``c`` contains each of that class's marker terms
exactly once; all other tokens are drawn uniformly from a shared pool of noise
terms. Marker terms perfectly separate the classes, so any sound ranking puts
them first and any sound classifier fed them is (near) perfect.
"""

from __future__ import annotations

import numpy as np

from .corpus import Corpus, Document


def class_label(c: int) -> str:
    return f"class{c}"


def planted_term(c: int, j: int) -> str:
    return f"plant{c}m{j:03d}"


def noise_term(j: int) -> str:
    return f"noise{j:05d}"


def planted_corpus(n_classes: int = 5, docs_per_class: int = 100, planted_per_class: int = 20,
                   n_noise: int = 2000, noise_per_doc: int = 60, seed: int = 0) -> Corpus:
    rng = np.random.Generator(np.random.PCG64(seed))
    docs = []
    for c in range(n_classes):
        markers = [planted_term(c, j) for j in range(planted_per_class)]
        for d in range(docs_per_class):
            noise = [noise_term(j) for j in rng.integers(0, n_noise, size=noise_per_doc)]
            tokens = markers + noise
            order = rng.permutation(len(tokens))
            text = " ".join(tokens[i] for i in order)
            docs.append(Document(f"{class_label(c)}/doc{d:04d}", class_label(c), text))
    return Corpus(docs)
