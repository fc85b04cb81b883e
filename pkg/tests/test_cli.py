import pytest

from urduclf.cli import main
from urduclf.synthetic import planted_corpus


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli") / "corpus"
    for d in planted_corpus(n_classes=3, docs_per_class=15, planted_per_class=4, n_noise=100, noise_per_doc=15, seed=1):
        path = root / f"{d.id}.txt"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(d.raw_text, encoding="utf-8")
    return root


def test_no_arguments(capsys):
    assert main([]) == 1
    assert "usage" in capsys.readouterr().err


def test_unknown_subcommand(capsys):
    assert main(["frobnicate"]) == 1
    assert "usage" in capsys.readouterr().err


def test_rank_without_corpus(capsys):
    assert main(["rank", "--metric", "ndm"]) == 1
    assert "--corpus" in capsys.readouterr().err


def test_unknown_metric(corpus_dir, capsys):
    assert main(["rank", "--corpus", str(corpus_dir), "--metric", "xyz"]) == 1


def test_missing_corpus_is_data_error(tmp_path, capsys):
    assert main(["profile", "--corpus", str(tmp_path / "nope")]) == 2
    assert capsys.readouterr().out == ""


def test_profile(corpus_dir, capsys):
    assert main(["profile", "--corpus", str(corpus_dir), "--top-n", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    body = [l for l in lines if not l.startswith("#")]
    assert body[0] == "term\tfrequency" and len(body) == 6
    assert "# command=profile" in lines


def test_rank_and_select(corpus_dir, tmp_path):
    assert main(["rank", "--corpus", str(corpus_dir), "--metric", "chisq", "--out", str(tmp_path / "r.tsv")]) == 0
    text = (tmp_path / "r.tsv").read_text(encoding="utf-8")
    assert "# metric=CHISQ" in text and "term\tclass\tmetric\tscore\trank" in text
    assert main(["select", "--corpus", str(corpus_dir), "--metric", "ndm", "--k", "4",
                 "--out", str(tmp_path / "s.tsv")]) == 0
    rows = [l.split("\t") for l in (tmp_path / "s.tsv").read_text(encoding="utf-8").splitlines() if not l.startswith("#")]
    assert rows[0] == ["term", "best_rank", "classes"]
    assert {r[0] for r in rows[1:]} == {f"plant{c}m{j:03d}" for c in range(3) for j in range(4)}


def test_export_vocab(corpus_dir, tmp_path):
    out = tmp_path / "v.tsv"
    assert main(["export-vocab", "--corpus", str(corpus_dir), "--most-frequent", "10", "--out", str(out)]) == 0
    assert len(out.read_text(encoding="utf-8").splitlines()) == 10
    assert main(["export-vocab", "--corpus", str(corpus_dir), "--metric", "ig", "--k", "2", "--out", str(out)]) == 0
    assert main(["export-vocab", "--corpus", str(corpus_dir), "--metric", "ig", "--out", str(out)]) == 1


@pytest.mark.parametrize("clf", ["nb", "svm"])
def test_train_predict_evaluate(corpus_dir, tmp_path, clf):
    model = tmp_path / f"{clf}.model"
    pred = tmp_path / "pred.tsv"
    assert main(["train", "--corpus", str(corpus_dir), "--classifier", clf, "--metric", "bns", "--k", "4",
                 "--model", str(model)]) == 0
    assert main(["predict", "--corpus", str(corpus_dir), "--model", str(model), "--test-split", "--out", str(pred)]) == 0
    rows = [l for l in pred.read_text(encoding="utf-8").splitlines() if not l.startswith("#")]
    assert rows[0] == "id\tgold\tpredicted" and len(rows) == 1 + 3 * 4  # 15 docs: 11 train, 4 test
    rep = tmp_path / "eval.tsv"
    assert main(["evaluate", "--predictions", str(pred), "--out", str(rep)]) == 0
    macro = [l for l in rep.read_text(encoding="utf-8").splitlines() if l.startswith("macro")][0]
    assert float(macro.split("\t")[3]) == 1.0


def test_predict_with_corrupt_model(corpus_dir, tmp_path, capsys):
    bad = tmp_path / "bad.model"
    bad.write_text("garbage\n", encoding="utf-8")
    assert main(["predict", "--corpus", str(corpus_dir), "--model", str(bad)]) == 2
    assert "bad.model" in capsys.readouterr().err


def test_sweep_example(corpus_dir, tmp_path):
    out = tmp_path / "out"
    argv = ["sweep", "--corpus", str(corpus_dir), "--metrics", "ndm,chisq", "--k", "5,10",
            "--classifiers", "nb,svm", "--seed", "7", "--out", str(out)]
    assert main(argv) == 0
    tsv = (out / "sweep.tsv").read_text(encoding="utf-8").splitlines()
    body = [l for l in tsv if not l.startswith("#")]
    assert body[0].startswith("metric\tk\tclassifier") and len(body) == 1 + 2 * 2 * 2
    assert "# seed=7" in tsv and "# metrics=NDM,CHISQ" in tsv
    assert "## Best test point per metric" in (out / "sweep.md").read_text(encoding="utf-8")


def test_sweep_out_from_environment(corpus_dir, tmp_path, monkeypatch):
    monkeypatch.setenv("URDUCLF_OUT", str(tmp_path / "envout"))
    argv = ["sweep", "--corpus", str(corpus_dir), "--metrics", "acc2", "--k", "5", "--classifiers", "nb"]
    assert main(argv) == 0
    assert (tmp_path / "envout" / "sweep.tsv").exists()


def test_sweep_threads_byte_identical(corpus_dir, tmp_path):
    common = ["sweep", "--corpus", str(corpus_dir), "--metrics", "ig,or", "--k", "3,8"]
    assert main(common + ["--threads", "1", "--out", str(tmp_path / "a")]) == 0
    assert main(common + ["--threads", "4", "--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a" / "sweep.tsv").read_bytes() == (tmp_path / "b" / "sweep.tsv").read_bytes()


def test_config_file_defaults(corpus_dir, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text(f"[urduclf]\ncorpus = {corpus_dir}\nmetric = gini\n", encoding="utf-8")
    out = tmp_path / "r.tsv"
    assert main(["rank", "--config", str(cfg), "--out", str(out)]) == 0
    assert "\tGINI\t" in out.read_text(encoding="utf-8")


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "sweep" in capsys.readouterr().out
