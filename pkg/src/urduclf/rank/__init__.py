from .metrics import EPS, METRICS, canonical_metric, metric_score, score_all
from .normal import inverse_normal_cdf
from .ranking import (
    RankedList,
    SelectedVocabulary,
    export_ranking,
    import_ranking,
    import_selected,
    rank_per_class,
    select_top_k_union,
)
from .stats import ContingencyTable, TermClassStats, TermStats, build_stats

__all__ = [
    "EPS", "METRICS", "canonical_metric", "metric_score", "score_all",
    "inverse_normal_cdf",
    "RankedList", "SelectedVocabulary", "export_ranking", "import_ranking", "import_selected",
    "rank_per_class", "select_top_k_union",
    "ContingencyTable", "TermClassStats", "TermStats", "build_stats",
]
