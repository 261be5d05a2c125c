"""Corpus triples and padded batch assembly.

Batches are built per length bucket (bucket width 4 on source length) so
padding stays bounded; the batch order and the order within each bucket are
shuffled from the caller's RNG. Target matrices carry <bos>-prefixed inputs
and <eos>-suffixed outputs with a 0/1 mask over real output positions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from .vocab import BOS_ID, EOS_ID, PAD_ID

BUCKET_WIDTH = 4


@dataclass(frozen=True)
class CaptionTriple:
    source: tuple[int, ...]
    target: tuple[int, ...]
    image: np.ndarray | None = None

    def __post_init__(self):
        if not self.source or not self.target:
            raise DataError("caption triple with empty source or target")
        if PAD_ID in self.source or PAD_ID in self.target:
            raise DataError("caption triple contains <pad> ids")


@dataclass
class Batch:
    src: np.ndarray          # (batch, max_src) int, <pad>-filled
    src_lengths: np.ndarray  # (batch,)
    tgt_in: np.ndarray       # (batch, max_tgt + 1) <bos> + target
    tgt_out: np.ndarray      # (batch, max_tgt + 1) target + <eos>
    tgt_mask: np.ndarray     # (batch, max_tgt + 1) float 0/1, 1 on real tgt_out
    images: np.ndarray | None  # (batch, d_img)

    @property
    def size(self) -> int:
        return self.src.shape[0]

    @property
    def token_count(self) -> float:
        return float(self.tgt_mask.sum())


def _assemble(triples: list[CaptionTriple]) -> Batch:
    n = len(triples)
    max_src = max(len(t.source) for t in triples)
    max_tgt = max(len(t.target) for t in triples)
    src = np.full((n, max_src), PAD_ID, dtype=np.int64)
    lengths = np.zeros(n, dtype=np.int64)
    tgt_in = np.full((n, max_tgt + 1), PAD_ID, dtype=np.int64)
    tgt_out = np.full((n, max_tgt + 1), PAD_ID, dtype=np.int64)
    mask = np.zeros((n, max_tgt + 1), dtype=np.float64)
    for i, t in enumerate(triples):
        src[i, : len(t.source)] = t.source
        lengths[i] = len(t.source)
        tgt_in[i, 0] = BOS_ID
        tgt_in[i, 1 : len(t.target) + 1] = t.target
        tgt_out[i, : len(t.target)] = t.target
        tgt_out[i, len(t.target)] = EOS_ID
        mask[i, : len(t.target) + 1] = 1.0
    images = None
    if triples[0].image is not None:
        images = np.stack([np.asarray(t.image, dtype=np.float64) for t in triples])
    return Batch(src, lengths, tgt_in, tgt_out, mask, images)


def make_batches(
    corpus: list[CaptionTriple],
    batch_size: int,
    rng: np.random.Generator | int,
) -> list[Batch]:
    """Bucket by source length, shuffle, and cut into padded batches.

    Every triple appears in exactly one batch; the last batch of a bucket
    may be short.
    """
    if batch_size < 1:
        raise DataError(f"batch_size must be >= 1, got {batch_size}")
    if not corpus:
        return []
    with_image = [t.image is not None for t in corpus]
    if any(with_image) and not all(with_image):
        raise DataError("corpus mixes triples with and without image features")

    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))

    buckets: dict[int, list[int]] = {}
    for i, t in enumerate(corpus):
        buckets.setdefault((len(t.source) - 1) // BUCKET_WIDTH, []).append(i)

    batches: list[Batch] = []
    for key in sorted(buckets):
        members = buckets[key]
        order = rng.permutation(len(members))
        shuffled = [members[j] for j in order]
        for start in range(0, len(shuffled), batch_size):
            chunk = [corpus[j] for j in shuffled[start : start + batch_size]]
            batches.append(_assemble(chunk))
    rng.shuffle(batches)
    return batches
