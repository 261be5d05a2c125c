"""Lowercasing, punctuation normalization, and whitespace tokenization.

The normalization rule table: curly quotes become straight quotes, en/em
dashes become "-", the ellipsis character becomes "...", and runs of
whitespace collapse. Tokenization then peels the characters . , ! ? ; : " ( )
off word boundaries as single-character tokens; hyphens and apostrophes stay
inside words. The transform is idempotent: re-tokenizing the joined output
reproduces it.
"""

from __future__ import annotations

from ..errors import EmptySegmentError

_CHAR_MAP = str.maketrans(
    {
        "“": '"',  # left double curly
        "”": '"',  # right double curly
        "„": '"',  # low double
        "‘": "'",  # left single curly
        "’": "'",  # right single curly
        "–": "-",  # en dash
        "—": "-",  # em dash
        "…": "...",
    }
)

_DETACH = set('.,!?;:"()')


def normalize_punctuation(raw: str) -> str:
    return " ".join(raw.translate(_CHAR_MAP).split())


def _peel(chunk: str) -> list[str]:
    """Split boundary punctuation off one whitespace-delimited chunk."""
    head: list[str] = []
    tail: list[str] = []
    while chunk and chunk[0] in _DETACH:
        head.append(chunk[0])
        chunk = chunk[1:]
    while chunk and chunk[-1] in _DETACH:
        tail.append(chunk[-1])
        chunk = chunk[:-1]
    middle = [chunk] if chunk else []
    return head + middle + tail[::-1]


def preprocess_line(raw: str) -> list[str]:
    """Lowercase, normalize, and tokenize one sentence.

    Raises EmptySegmentError for lines with no non-space content.
    """
    if not raw.strip():
        raise EmptySegmentError("empty segment")
    text = normalize_punctuation(raw.lower())
    tokens: list[str] = []
    for chunk in text.split():
        tokens.extend(_peel(chunk))
    if not tokens:
        raise EmptySegmentError("empty segment")
    return tokens
