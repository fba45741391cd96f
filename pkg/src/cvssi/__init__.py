"""Full-reference image quality from local contrast and saliency similarity."""

from .dataset import DatasetManifest, ManifestRecord, join_scores, load_manifest, load_scores, synth_corpus
from .errors import CvssiError
from .evaluation import CorrelationReport, LogisticParams, ScorePairs, evaluate, fit_logistic, krocc, plcc, rmse, srocc
from .metric import MetricParams, MetricScore, PoolingStrategy, ablate_all, ablate_pooling, cvssi_score, similarity_maps
from .similarity import SimilarityMap

__version__ = "0.1.0"

__all__ = [
    "CorrelationReport", "CvssiError", "DatasetManifest", "LogisticParams", "ManifestRecord",
    "MetricParams", "MetricScore", "PoolingStrategy", "ScorePairs", "SimilarityMap",
    "ablate_all", "ablate_pooling", "cvssi_score", "evaluate", "fit_logistic", "join_scores",
    "krocc", "load_manifest", "load_scores", "plcc", "rmse", "similarity_maps", "srocc", "synth_corpus",
]
