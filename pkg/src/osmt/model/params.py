"""Parameter construction, initialization, and checkpoint serialization.

Checkpoint layout (little-endian): magic b"OSMT", u32 version, u32 length +
JSON-encoded model config, then per parameter: u32 name length + utf-8 name,
u32 ndim, u32 dims, float32 payload. Loading rebuilds the expected shape
table from the config and validates every record against it.
"""

from __future__ import annotations

import io
import json
import struct
from pathlib import Path

import numpy as np

from ..errors import DataError
from ..numcore import Parameter, RngStreams
from .config import DECODER_LAYERS, ENCODER_LAYERS, ModelConfig

MAGIC = b"OSMT"
VERSION = 1
DIRECTIONS = ("fwd", "bwd")


def parameter_shapes(config: ModelConfig) -> dict[str, tuple[int, ...]]:
    """Name -> shape for every trainable tensor, in construction order."""
    hid = config.hidden_dim
    emb = config.embed_dim
    shapes: dict[str, tuple[int, ...]] = {
        "src_embed": (config.src_vocab_size, emb),
        "tgt_embed": (config.tgt_vocab_size, emb),
    }
    in_dim = emb
    for layer in range(ENCODER_LAYERS):
        for direction in DIRECTIONS:
            prefix = f"enc_l{layer}_{direction}"
            shapes[f"{prefix}_wx"] = (in_dim, 4 * hid)
            shapes[f"{prefix}_wh"] = (hid, 4 * hid)
            shapes[f"{prefix}_b"] = (4 * hid,)
        in_dim = 2 * hid
    in_dim = emb + hid  # input feeding: token embedding + previous attentional vector
    for layer in range(DECODER_LAYERS):
        shapes[f"dec_l{layer}_wx"] = (in_dim, 4 * hid)
        shapes[f"dec_l{layer}_wh"] = (hid, 4 * hid)
        shapes[f"dec_l{layer}_b"] = (4 * hid,)
        in_dim = hid
    shapes["attn_score_w"] = (hid, 2 * hid)
    shapes["attn_combine_w"] = (3 * hid, hid)
    shapes["attn_combine_b"] = (hid,)
    shapes["out_w"] = (hid, config.tgt_vocab_size)
    shapes["out_b"] = (config.tgt_vocab_size,)
    for layer in range(DECODER_LAYERS):
        shapes[f"bridge_l{layer}_h_w"] = (2 * hid, hid)
        shapes[f"bridge_l{layer}_h_b"] = (hid,)
        shapes[f"bridge_l{layer}_c_w"] = (2 * hid, hid)
        shapes[f"bridge_l{layer}_c_b"] = (hid,)
    if config.uses_image:
        for layer in range(ENCODER_LAYERS):
            for direction in DIRECTIONS:
                for state in ("h", "c"):
                    prefix = f"img_enc_l{layer}_{direction}_{state}"
                    shapes[f"{prefix}_w"] = (config.d_img, hid)
                    shapes[f"{prefix}_b"] = (hid,)
        for layer in range(DECODER_LAYERS):
            for state in ("h", "c"):
                prefix = f"img_dec_l{layer}_{state}"
                shapes[f"{prefix}_w"] = (config.d_img, hid)
                shapes[f"{prefix}_b"] = (hid,)
    return shapes


def _is_lstm_bias(name: str) -> bool:
    return name.endswith("_b") and (name.startswith("enc_l") or name.startswith("dec_l"))


class ModelParams:
    """All trainable weights of one model, addressable by name."""

    def __init__(self, config: ModelConfig, params: dict[str, Parameter]):
        self.config = config
        self._params = params

    def __getitem__(self, name: str) -> Parameter:
        return self._params[name]

    def names(self) -> list[str]:
        return list(self._params)

    def all(self) -> list[Parameter]:
        return list(self._params.values())

    def copy(self) -> "ModelParams":
        fresh = {}
        for name, p in self._params.items():
            q = Parameter(p.data.copy(), name=name)
            fresh[name] = q
        return ModelParams(self.config, fresh)

    # --- checkpoint io ---

    def to_bytes(self) -> bytes:
        buf = io.BytesIO()
        buf.write(MAGIC)
        buf.write(struct.pack("<I", VERSION))
        cfg = json.dumps(self.config.to_dict(), sort_keys=True).encode("utf-8")
        buf.write(struct.pack("<I", len(cfg)))
        buf.write(cfg)
        for name, p in self._params.items():
            nm = name.encode("utf-8")
            buf.write(struct.pack("<I", len(nm)))
            buf.write(nm)
            buf.write(struct.pack("<I", p.data.ndim))
            buf.write(struct.pack(f"<{p.data.ndim}I", *p.data.shape))
            buf.write(p.data.astype("<f4").tobytes())
        return buf.getvalue()

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def from_bytes(cls, raw: bytes, source: str = "<bytes>") -> "ModelParams":
        view = memoryview(raw)
        if bytes(view[:4]) != MAGIC:
            raise DataError(f"{source}: bad checkpoint magic")
        (version,) = struct.unpack_from("<I", view, 4)
        if version != VERSION:
            raise DataError(f"{source}: unsupported checkpoint version {version}")
        (cfg_len,) = struct.unpack_from("<I", view, 8)
        offset = 12
        config = ModelConfig.from_dict(json.loads(bytes(view[offset : offset + cfg_len])))
        offset += cfg_len

        expected = parameter_shapes(config)
        params: dict[str, Parameter] = {}
        while offset < len(raw):
            (name_len,) = struct.unpack_from("<I", view, offset)
            offset += 4
            name = bytes(view[offset : offset + name_len]).decode("utf-8")
            offset += name_len
            (ndim,) = struct.unpack_from("<I", view, offset)
            offset += 4
            shape = struct.unpack_from(f"<{ndim}I", view, offset)
            offset += 4 * ndim
            count = int(np.prod(shape)) if ndim else 1
            payload = np.frombuffer(view, dtype="<f4", count=count, offset=offset)
            offset += 4 * count
            if name not in expected:
                raise DataError(f"{source}: unexpected parameter {name!r} for this config")
            if tuple(shape) != expected[name]:
                raise DataError(
                    f"{source}: parameter {name!r} has shape {tuple(shape)}, "
                    f"config requires {expected[name]}"
                )
            params[name] = Parameter(payload.astype(np.float64).reshape(shape), name=name)
        missing = set(expected) - set(params)
        if missing:
            raise DataError(f"{source}: checkpoint missing parameters {sorted(missing)}")
        ordered = {name: params[name] for name in expected}
        return cls(config, ordered)

    @classmethod
    def load(cls, path: str | Path) -> "ModelParams":
        return cls.from_bytes(Path(path).read_bytes(), source=str(path))


def init_params(config: ModelConfig, seed: int | np.random.Generator) -> ModelParams:
    """Fresh weights: uniform(-0.1, 0.1) everywhere, zero biases, except the
    LSTM forget-gate bias block which starts at 1."""
    if isinstance(seed, np.random.Generator):
        rng = seed
    else:
        rng = RngStreams(seed).stream("init")
    hid = config.hidden_dim
    params: dict[str, Parameter] = {}
    for name, shape in parameter_shapes(config).items():
        if name.endswith("_b"):
            data = np.zeros(shape)
            if _is_lstm_bias(name):
                data[hid : 2 * hid] = 1.0  # forget gate block of [i, f, g, o]
        else:
            data = rng.uniform(-0.1, 0.1, size=shape)
        params[name] = Parameter(data, name=name)
    return ModelParams(config, params)
