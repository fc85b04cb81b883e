"""Command-line entry point.

Exit status: 0 on success, 1 on usage errors, 2 on data or runtime errors.
Data goes to files or stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .bench import (
    CLASSIFIERS,
    DEFAULT_K,
    SweepConfig,
    aggregate_tsv,
    evaluate,
    render_report,
    run_sweep,
    run_sweep_seeds,
)
from .corpus import Corpus, load_corpus, stratified_split
from .models import load_model, save_model, train_linear_svm, train_nb
from .models.svm import DEFAULT_C, DEFAULT_MAX_EPOCHS, DEFAULT_TOL
from .rank import METRICS, build_stats, canonical_metric, export_ranking, rank_per_class, select_top_k_union
from .text import LemmaLexicon, Preprocessor, StopList, TokenizerConfig, frequency_profile
from .vectorize import (
    apply_tfidf,
    build_vocabulary,
    compute_idf,
    count_matrix,
    count_rows,
    top_frequent_vocabulary,
)

log = logging.getLogger("urduclf")

OUT_ENV = "URDUCLF_OUT"
FORMAT_ALIASES = {"dir": "dir-per-class", "dir-per-class": "dir-per-class",
                  "manifest": "manifest-tsv", "manifest-tsv": "manifest-tsv"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _csv(kind):
    def parse(value: str):
        items = [v.strip() for v in value.split(",") if v.strip()]
        if not items:
            raise argparse.ArgumentTypeError("empty list")
        return [kind(v) for v in items]
    return parse


def _metric(value: str) -> str:
    try:
        return canonical_metric(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_corpus_args(p, required=True):
    g = p.add_argument_group("corpus and preprocessing")
    g.add_argument("--corpus", required=required, help="corpus directory (dir format) or manifest TSV")
    g.add_argument("--format", default="dir", choices=sorted(FORMAT_ALIASES), help="corpus layout (default: dir)")
    g.add_argument("--lexicon", help="lemma lexicon TSV (surface<TAB>lemma)")
    g.add_argument("--stoplist", help="stop-word list, one token per line")
    g.add_argument("--keep-diacritics", action="store_true", help="do not strip harakat")
    g.add_argument("--drop-digits", action="store_true", help="drop digit-only tokens")
    g.add_argument("--no-lowercase", action="store_true", help="keep ASCII case")


def _add_split_args(p, optional_split=True):
    g = p.add_argument_group("split")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--train-fraction", type=float, default=0.7)
    if optional_split:
        g.add_argument("--no-split", action="store_true", help="use the whole corpus instead of the train split")


def _add_common(p):
    p.add_argument("--config", help="INI file whose [urduclf] keys provide defaults for flags")
    p.add_argument("--threads", type=int, default=1, help="worker threads, 0 = all cores (results do not depend on it)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="urduclf", description="Filter-based feature selection benchmarks for Urdu text classification.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    p = sub.add_parser("profile", help="most frequent tokens (stop-word curation)")
    _add_corpus_args(p); _add_common(p)
    p.add_argument("--top-n", type=int, default=1500)
    p.add_argument("--out", help="output TSV (default: stdout)")

    for name, helptext in (("rank", "rank terms per class with one metric"),
                           ("select", "top-k union of per-class rankings")):
        p = sub.add_parser(name, help=helptext)
        _add_corpus_args(p); _add_split_args(p); _add_common(p)
        p.add_argument("--metric", type=_metric, required=True, help="one of " + ", ".join(METRICS))
        if name == "select":
            p.add_argument("--k", type=int, required=True)
        p.add_argument("--out", help="output TSV (default: stdout)")

    p = sub.add_parser("export-vocab", help="write a term<TAB>index vocabulary for downstream models")
    _add_corpus_args(p); _add_split_args(p); _add_common(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--metric", type=_metric, help="select by metric (requires --k)")
    src.add_argument("--most-frequent", type=int, metavar="N", help="the N most frequent training terms")
    p.add_argument("--k", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="train a classifier and save it")
    _add_corpus_args(p); _add_split_args(p); _add_common(p)
    p.add_argument("--classifier", choices=CLASSIFIERS, required=True)
    p.add_argument("--metric", type=_metric, help="feature selection metric (default: all terms)")
    p.add_argument("--k", type=int)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--C", type=float, default=DEFAULT_C)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-epochs", type=int, default=DEFAULT_MAX_EPOCHS)
    p.add_argument("--model", required=True, help="output model file")

    p = sub.add_parser("predict", help="label documents with a saved model")
    _add_corpus_args(p); _add_split_args(p); _add_common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--test-split", action="store_true", help="predict only the test half of the seeded split")
    p.add_argument("--out", help="output TSV id<TAB>gold<TAB>predicted (default: stdout)")

    p = sub.add_parser("evaluate", help="precision/recall/F1 from a predictions TSV")
    _add_common(p)
    p.add_argument("--predictions", required=True, help="TSV with gold and predicted columns")
    p.add_argument("--out", help="output TSV (default: stdout)")

    p = sub.add_parser("sweep", help="run the full metric x k x classifier benchmark")
    _add_corpus_args(p); _add_split_args(p, optional_split=False); _add_common(p)
    p.add_argument("--metrics", type=_csv(_metric), default=list(METRICS))
    p.add_argument("--k", type=_csv(int), default=list(DEFAULT_K))
    p.add_argument("--classifiers", type=_csv(str), default=list(CLASSIFIERS))
    p.add_argument("--seeds", type=_csv(int), help="additionally aggregate mean/stdev over these seeds")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--C", type=float, default=DEFAULT_C)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-epochs", type=int, default=DEFAULT_MAX_EPOCHS)
    p.add_argument("--timings", action="store_true", help="fill the wall_ms column (breaks byte-stability)")
    p.add_argument("--out", default=os.environ.get(OUT_ENV), help=f"output directory (default: ${OUT_ENV})")
    return parser


# keys that change nothing about the results
_EXECUTION_KEYS = {"threads", "verbose", "config", "out", "model", "predictions", "command"}


def provenance(args: argparse.Namespace) -> dict[str, str]:
    """Resolved settings echoed into output headers."""
    out = {"command": args.command}
    for key, value in sorted(vars(args).items()):
        if key in _EXECUTION_KEYS or value is None or value is False:
            continue
        out[key] = ",".join(map(str, value)) if isinstance(value, list) else str(value)
    return out


def _apply_config_file(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cp = configparser.ConfigParser()
    if not cp.read(known.config, encoding="utf-8"):
        raise UsageError(f"cannot read config file {known.config}")
    section = cp["urduclf"] if cp.has_section("urduclf") else cp.defaults()
    argv_cmd = next((a for a in argv if not a.startswith("-")), None)
    sub = parser._subparsers._group_actions[0].choices.get(argv_cmd) if parser._subparsers else None
    if sub is None:
        return
    defaults = {}
    for action in sub._actions:
        key = action.dest
        if key in section:
            raw = section[key]
            if isinstance(action, (argparse._StoreTrueAction,)):
                defaults[key] = raw.strip().lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                defaults[key] = action.type(raw)
            else:
                defaults[key] = raw
            action.required = False
    sub.set_defaults(**defaults)


def _preprocessor(args) -> Preprocessor:
    cfg = TokenizerConfig(strip_diacritics=not args.keep_diacritics, keep_digits=not args.drop_digits,
                          lowercase_ascii=not args.no_lowercase)
    lexicon = LemmaLexicon.load(args.lexicon, cfg) if args.lexicon else LemmaLexicon()
    stops = StopList.load(args.stoplist, cfg) if args.stoplist else StopList()
    return Preprocessor(cfg, lexicon, stops)


def _load(args) -> Corpus:
    corpus = load_corpus(args.corpus, FORMAT_ALIASES[args.format])
    log.info("loaded %d documents in %d classes", len(corpus), len(corpus.classes))
    corpus = _preprocessor(args).process_corpus(corpus)
    log.info("%d tokens after preprocessing", corpus.token_count())
    return corpus


def _training_part(args, corpus: Corpus) -> Corpus:
    if getattr(args, "no_split", False):
        return corpus
    return stratified_split(corpus, args.train_fraction, args.seed).train


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _write(path, text: str) -> None:
    fh, close = _open_out(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _header(args) -> str:
    return "".join(f"# {k}={v}\n" for k, v in provenance(args).items())


def cmd_profile(args) -> None:
    corpus = _load(args)
    rows = frequency_profile(corpus, args.top_n)
    _write(args.out, _header(args) + "term\tfrequency\n" + "".join(f"{t}\t{n}\n" for t, n in rows))


def _rank(args):
    train = _training_part(args, _load(args))
    matrix = count_matrix(train, build_vocabulary(train))
    return rank_per_class(build_stats(matrix), args.metric, threads=args.threads), matrix


def _export(obj, args) -> None:
    comments = [f"{k}={v}" for k, v in provenance(args).items()]
    if args.out in (None, "-"):
        import tempfile

        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "out.tsv"
            export_ranking(obj, path, comments)
            sys.stdout.write(path.read_text(encoding="utf-8"))
    else:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        export_ranking(obj, args.out, comments)


def cmd_rank(args) -> None:
    ranked, _ = _rank(args)
    _export(ranked, args)


def cmd_select(args) -> None:
    ranked, _ = _rank(args)
    _export(select_top_k_union(ranked, args.k), args)


def cmd_export_vocab(args) -> None:
    if args.metric:
        if not args.k:
            raise UsageError("--metric requires --k")
        ranked, _ = _rank(args)
        vocab = select_top_k_union(ranked, args.k).vocabulary
    else:
        train = _training_part(args, _load(args))
        vocab = top_frequent_vocabulary(count_matrix(train, build_vocabulary(train)), args.most_frequent)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    vocab.save(args.out)
    log.info("wrote %d terms to %s", len(vocab), args.out)


def cmd_train(args) -> None:
    train = _training_part(args, _load(args))
    matrix = count_matrix(train, build_vocabulary(train))
    if args.metric:
        if not args.k:
            raise UsageError("--metric requires --k")
        ranked = rank_per_class(build_stats(matrix), args.metric, threads=args.threads)
        matrix = matrix.restrict(select_top_k_union(ranked, args.k).vocabulary)
    if args.classifier == "nb":
        model = train_nb(matrix, args.alpha)
    else:
        weighted = apply_tfidf(matrix, compute_idf(matrix), l2_normalize_rows=True)
        model = train_linear_svm(weighted, args.C, args.tol, args.max_epochs, args.seed, threads=args.threads)
        if not all(model.converged):
            log.warning("SVM did not converge for classes %s",
                        [c for c, ok in zip(model.classes, model.converged) if not ok])
    Path(args.model).parent.mkdir(parents=True, exist_ok=True)
    save_model(model, args.model)
    log.info("saved %s model over %d terms to %s", model.model_type, len(model.vocab), args.model)


def cmd_predict(args) -> None:
    model = load_model(args.model)
    corpus = _load(args)
    if args.test_split:
        corpus = stratified_split(corpus, args.train_fraction, args.seed).test
    counts = count_rows([d.token_seq for d in corpus], model.vocab)
    X = model.transform(counts) if model.model_type == "svm" else counts
    labels = model.predict(X)
    lines = [_header(args), "id\tgold\tpredicted\n"]
    lines += [f"{d.id}\t{d.class_label}\t{p}\n" for d, p in zip(corpus, labels)]
    _write(args.out, "".join(lines))


def cmd_evaluate(args) -> None:
    gold, pred = [], []
    with open(args.predictions, encoding="utf-8") as fh:
        rows = [l.rstrip("\n").split("\t") for l in fh if l.strip() and not l.startswith("#")]
    if not rows:
        raise ValueError(f"{args.predictions}: empty file")
    header, body = rows[0], rows[1:]
    try:
        gi, pi = header.index("gold"), header.index("predicted")
    except ValueError:
        raise ValueError(f"{args.predictions}: header needs 'gold' and 'predicted' columns") from None
    for r in body:
        gold.append(r[gi])
        pred.append(r[pi])
    report = evaluate(gold, pred, sorted(set(gold) | set(pred)))
    _write(args.out, _header(args) + report.to_tsv())


def cmd_sweep(args) -> None:
    if not args.out:
        raise UsageError(f"sweep needs --out or ${OUT_ENV}")
    corpus = _load(args)
    config = SweepConfig(tuple(args.metrics), tuple(args.k), tuple(args.classifiers), args.seed,
                         args.train_fraction, args.alpha, args.C, args.tol, args.max_epochs, args.threads)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    header = provenance(args)
    result = run_sweep(corpus, config)
    render_report(result, "tsv", out / "sweep.tsv", header=header, timings=args.timings)
    render_report(result, "markdown", out / "sweep.md", header=header)
    for row in result.rows:
        if row.error:
            log.error("cell %s k=%d %s failed: %s", row.metric, row.k, row.classifier, row.error)
    if args.seeds:
        results = run_sweep_seeds(corpus, config, args.seeds)
        (out / "sweep_seeds.tsv").write_text(aggregate_tsv(results, header), encoding="utf-8")
    log.info("wrote reports to %s", out)


COMMANDS = {
    "profile": cmd_profile,
    "rank": cmd_rank,
    "select": cmd_select,
    "export-vocab": cmd_export_vocab,
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return 1
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"urduclf {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, FloatingPointError) as exc:
        print(f"urduclf {args.command}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
