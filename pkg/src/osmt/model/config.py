"""Model hyperparameter record."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from ..errors import ConfigError

VARIANTS = ("osu1", "osu2")
ENCODER_LAYERS = 2
DECODER_LAYERS = 2


@dataclass(frozen=True)
class ModelConfig:
    """Architecture shape: ``osu1`` grounds encoder and decoder initial
    states in an image feature vector, ``osu2`` is the text-only baseline."""

    variant: str
    src_vocab_size: int
    tgt_vocab_size: int
    embed_dim: int = 500
    hidden_dim: int = 500
    d_img: int = 2048
    dropout_rate: float = 0.6

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        for field in ("src_vocab_size", "tgt_vocab_size", "embed_dim", "hidden_dim", "d_img"):
            if getattr(self, field) < 1:
                raise ConfigError(f"{field} must be positive, got {getattr(self, field)}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")

    @property
    def uses_image(self) -> bool:
        return self.variant == "osu1"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        return cls(**data)
