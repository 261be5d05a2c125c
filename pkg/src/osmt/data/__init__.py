"""Text preprocessing, vocabularies, image features, and batching."""

from .batch import Batch, CaptionTriple, make_batches
from .imgf import load_features, write_features
from .text import normalize_punctuation, preprocess_line
from .vocab import BOS_ID, EOS_ID, PAD_ID, RESERVED, UNK_ID, Vocabulary, build_vocab

__all__ = [
    "BOS_ID",
    "Batch",
    "CaptionTriple",
    "EOS_ID",
    "PAD_ID",
    "RESERVED",
    "UNK_ID",
    "Vocabulary",
    "build_vocab",
    "load_features",
    "make_batches",
    "normalize_punctuation",
    "preprocess_line",
    "write_features",
]
