"""Token <-> id mapping with reserved symbols and no frequency cutoff.

Ids 0..3 are fixed: <pad>, <unk>, <bos>, <eos>. Every distinct training
token gets an id in first-occurrence order, so vocabulary construction is
deterministic for a given corpus.
"""

from __future__ import annotations

from collections.abc import Iterable
from pathlib import Path

from ..errors import DataError

PAD_ID, UNK_ID, BOS_ID, EOS_ID = 0, 1, 2, 3
RESERVED = ("<pad>", "<unk>", "<bos>", "<eos>")


class Vocabulary:
    def __init__(self, tokens: Iterable[str] = ()):
        self._tokens: list[str] = list(RESERVED)
        self._index: dict[str, int] = {t: i for i, t in enumerate(self._tokens)}
        for tok in tokens:
            self.add(tok)

    def add(self, token: str) -> int:
        idx = self._index.get(token)
        if idx is None:
            idx = len(self._tokens)
            self._tokens.append(token)
            self._index[token] = idx
        return idx

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def id_of(self, token: str) -> int:
        """Id for a token, falling back to <unk>."""
        return self._index.get(token, UNK_ID)

    def token_of(self, idx: int) -> str:
        if not 0 <= idx < len(self._tokens):
            raise DataError(f"token id {idx} out of range for vocabulary of {len(self)}")
        return self._tokens[idx]

    def encode(self, tokens: Iterable[str]) -> list[int]:
        return [self.id_of(t) for t in tokens]

    def decode(self, ids: Iterable[int]) -> list[str]:
        return [self.token_of(i) for i in ids]

    def save(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self._tokens) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if tuple(lines[:4]) != RESERVED:
            raise DataError(f"{path}: vocabulary file must start with {' '.join(RESERVED)}")
        vocab = cls()
        for tok in lines[4:]:
            vocab.add(tok)
        if len(vocab) != len(lines):
            raise DataError(f"{path}: duplicate tokens in vocabulary file")
        return vocab


def build_vocab(corpus: Iterable[Iterable[str]]) -> Vocabulary:
    """All distinct tokens of a tokenized corpus, in first-occurrence order."""
    vocab = Vocabulary()
    seen_any = False
    for sentence in corpus:
        seen_any = True
        for tok in sentence:
            vocab.add(tok)
    if not seen_any:
        raise DataError("cannot build a vocabulary from an empty corpus")
    return vocab
