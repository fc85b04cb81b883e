"""Plain-text model files.

Layout::

    format=urduclf-model<TAB>model_type=nb<TAB>version=1<TAB>vocab_hash=<16 hex>
    @<block name><TAB><row count>
    <row>...
    ...
    checksum<TAB><16 hex>

Floats are written with ``repr`` so values survive the round trip bit for bit.
The checksum is BLAKE2b-64 over every byte before the checksum line.
"""

from __future__ import annotations

import hashlib
import os

import numpy as np

from ..vectorize import Vocabulary
from .nb import NBModel
from .svm import LinearModel

FORMAT = "urduclf-model"
VERSION = 1


class ModelFormatError(ValueError):
    pass


class ChecksumError(ModelFormatError):
    pass


class ModelTypeError(ModelFormatError):
    pass


def _digest(payload: bytes) -> str:
    return hashlib.blake2b(payload, digest_size=8).hexdigest()


def vocab_hash(vocab: Vocabulary) -> str:
    return _digest("\n".join(vocab.terms).encode("utf-8"))


def _floats(values) -> str:
    return "\t".join(repr(float(v)) for v in np.ravel(values))


def _parse_floats(line: str) -> np.ndarray:
    return np.array([float(v) for v in line.split("\t")], dtype=np.float64) if line else np.empty(0)


def _blocks(model) -> list[tuple[str, list[str]]]:
    classes = list(model.classes)
    terms = list(model.vocab.terms)
    for t in classes + terms:
        if "\t" in t or "\n" in t:
            raise ModelFormatError(f"cannot store {t!r}")
    if isinstance(model, NBModel):
        meta = [f"alpha\t{model.alpha!r}"]
        params = [("log_prior", [_floats(model.log_prior)]),
                  ("log_likelihood", [_floats(row) for row in model.log_likelihood])]
    else:
        meta = [f"C\t{model.C!r}", f"tol\t{model.tol!r}", f"max_epochs\t{model.max_epochs}",
                f"seed\t{model.seed}", f"row_normalized\t{int(model.row_normalized)}",
                f"converged\t{','.join(str(int(c)) for c in model.converged)}",
                f"epochs\t{','.join(str(e) for e in model.epochs)}"]
        params = [("class_weight", [_floats(model.class_weight)]),
                  ("intercept", [_floats(model.intercept)]),
                  ("coef", [_floats(row) for row in model.coef])]
        if model.idf is not None:
            params.append(("idf", [_floats(model.idf)]))
    return [("meta", meta), ("classes", classes), ("vocab", terms)] + params


def save_model(model: NBModel | LinearModel, path: str | os.PathLike) -> None:
    header = "\t".join([f"format={FORMAT}", f"model_type={model.model_type}",
                        f"version={VERSION}", f"vocab_hash={vocab_hash(model.vocab)}"])
    lines = [header]
    for name, rows in _blocks(model):
        lines.append(f"@{name}\t{len(rows)}")
        lines.extend(rows)
    payload = ("\n".join(lines) + "\n").encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(payload)
        fh.write(f"checksum\t{_digest(payload)}\n".encode("ascii"))


def load_model(path: str | os.PathLike, expected_type: str | None = None) -> NBModel | LinearModel:
    raw = open(path, "rb").read()
    body, sep, tail = raw.rstrip(b"\n").rpartition(b"\n")
    if not sep or not tail.startswith(b"checksum\t"):
        raise ModelFormatError(f"{path}: truncated model file (no checksum line)")
    payload = body + b"\n"
    if tail.split(b"\t", 1)[1].decode("ascii", "replace") != _digest(payload):
        raise ChecksumError(f"{path}: checksum mismatch")

    lines = payload.decode("utf-8").split("\n")[:-1]
    try:
        header = dict(field.split("=", 1) for field in lines[0].split("\t"))
    except ValueError:
        raise ModelFormatError(f"{path}: bad header") from None
    if header.get("format") != FORMAT:
        raise ModelFormatError(f"{path}: not a {FORMAT} file")
    if header.get("version") != str(VERSION):
        raise ModelFormatError(f"{path}: unsupported version {header.get('version')!r}")
    model_type = header.get("model_type")
    if expected_type is not None and model_type != expected_type:
        raise ModelTypeError(f"{path}: holds a {model_type!r} model, expected {expected_type!r}")

    blocks: dict[str, list[str]] = {}
    i = 1
    while i < len(lines):
        name, count = lines[i][1:].split("\t")
        n = int(count)
        blocks[name] = lines[i + 1:i + 1 + n]
        i += 1 + n
    meta = dict(row.split("\t", 1) for row in blocks["meta"])
    classes = tuple(blocks["classes"])
    vocab = Vocabulary(blocks["vocab"])
    if vocab_hash(vocab) != header.get("vocab_hash"):
        raise ModelFormatError(f"{path}: vocabulary hash mismatch")
    V = len(vocab)

    def matrix(name):
        rows = [_parse_floats(r) for r in blocks[name]]
        return np.vstack(rows) if rows else np.empty((0, V))

    if model_type == "nb":
        return NBModel(classes, _parse_floats(blocks["log_prior"][0]), matrix("log_likelihood"),
                       float(meta["alpha"]), vocab)
    if model_type == "svm":
        ints = lambda s: tuple(int(v) for v in s.split(",") if v)
        idf = _parse_floats(blocks["idf"][0]) if "idf" in blocks else None
        return LinearModel(
            classes, matrix("coef"), _parse_floats(blocks["intercept"][0]), float(meta["C"]),
            _parse_floats(blocks["class_weight"][0]), float(meta["tol"]), int(meta["max_epochs"]),
            int(meta["seed"]), vocab, idf, bool(int(meta["row_normalized"])),
            tuple(bool(v) for v in ints(meta["converged"])), ints(meta["epochs"]),
        )
    raise ModelTypeError(f"{path}: unknown model type {model_type!r}")
