"""Capsule-network sentence-redundancy classifier for the DPP summarizer."""

from .config import ModelConfig, TrainSettings, TINY_CONFIG
from .data import PairBatch, PairRecord, load_pairs, make_batch, overlap_vector
from .model import RedundancyCapsNet, dynamic_routing, squash
from .scoring import export_similarity, load_cluster_sentences, score_cluster
from .train import evaluate_accuracy, load_checkpoint, save_checkpoint, train
from .vocab import BOS_ID, PAD_ID, UNK_ID, Vocabulary

__version__ = "0.1.0"

__all__ = [
    "ModelConfig", "TrainSettings", "TINY_CONFIG",
    "PairBatch", "PairRecord", "load_pairs", "make_batch", "overlap_vector",
    "RedundancyCapsNet", "dynamic_routing", "squash",
    "export_similarity", "load_cluster_sentences", "score_cluster",
    "evaluate_accuracy", "load_checkpoint", "save_checkpoint", "train",
    "BOS_ID", "PAD_ID", "UNK_ID", "Vocabulary",
    "__version__",
]
