"""Extractive multi-document summarization with determinantal point processes."""

from .corpus import Cluster, Document, Sentence, load_cluster, load_clusters, tokenize
from .dpp import LEnsemble, SummarySelection, build_l, exhaustive_map, greedy_map, log_prob, marginal_kernel
from .errors import NumericalError, ParseError, ValidationError
from .estimator import DppSummarizer
from .features import IdfTable, build_idf, feature_matrix, quality_features, tfidf
from .rouge import RougeScore, lcs_length, rouge_l, rouge_n, rouge_su4
from .similarity import combine, cosine_matrix, emit_heatmap, project_psd, read_similarity_file, write_similarity_file
from .training import OracleLabel, QualityModel, TrainConfig, oracle_labels, train_dpp

__version__ = "0.1.0"

__all__ = [
    "Cluster", "Document", "Sentence", "load_cluster", "load_clusters", "tokenize",
    "LEnsemble", "SummarySelection", "build_l", "exhaustive_map", "greedy_map",
    "log_prob", "marginal_kernel",
    "NumericalError", "ParseError", "ValidationError",
    "DppSummarizer",
    "IdfTable", "build_idf", "feature_matrix", "quality_features", "tfidf",
    "RougeScore", "lcs_length", "rouge_l", "rouge_n", "rouge_su4",
    "combine", "cosine_matrix", "emit_heatmap", "project_psd",
    "read_similarity_file", "write_similarity_file",
    "OracleLabel", "QualityModel", "TrainConfig", "oracle_labels", "train_dpp",
    "__version__",
]
