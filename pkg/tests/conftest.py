import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from urduclf.synthetic import planted_corpus  # noqa: E402
from urduclf.text import Preprocessor  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def planted():
    """Preprocessed planted-signal corpus: 5 classes x 100 docs, 20 markers per class."""
    return Preprocessor().process_corpus(planted_corpus())


@pytest.fixture(scope="session")
def small_planted():
    return Preprocessor().process_corpus(
        planted_corpus(n_classes=3, docs_per_class=20, planted_per_class=5, n_noise=200, noise_per_doc=20, seed=3)
    )


URDU_DOCS = {
    "sports": [
        "کرکٹ ٹیم نے میچ جیت لیا۔ کھلاڑی خوش ہیں۔",
        "ہاکی کا میچ کل ہوگا؟ ٹیم تیار ہے۔",
        "فٹبال کے کھلاڑی نے گول کیا۔",
    ],
    "business": [
        "بازار میں قیمت بڑھ گئی۔ کاروبار متاثر ہوا۔",
        "بینک نے شرح سود کم کی۔",
        "کمپنی کا منافع بڑھا۔ حصص کی قیمت بڑھی۔",
    ],
}


@pytest.fixture
def urdu_tree(tmp_path):
    root = tmp_path / "corpus"
    for label, texts in URDU_DOCS.items():
        d = root / label
        d.mkdir(parents=True)
        for i, t in enumerate(texts):
            (d / f"{i:02d}.txt").write_text(t, encoding="utf-8")
    return root
