"""Model architecture: config, parameters, checkpoints, forward passes."""

from .config import DECODER_LAYERS, ENCODER_LAYERS, VARIANTS, ModelConfig
from .network import (
    DecoderState,
    EncoderStates,
    attention_step,
    decode_init,
    decode_step,
    encode,
    image_to_init_states,
    sequence_loss,
)
from .params import ModelParams, init_params, parameter_shapes

__all__ = [
    "DECODER_LAYERS",
    "DecoderState",
    "ENCODER_LAYERS",
    "EncoderStates",
    "ModelConfig",
    "ModelParams",
    "VARIANTS",
    "attention_step",
    "decode_init",
    "decode_step",
    "encode",
    "image_to_init_states",
    "init_params",
    "parameter_shapes",
    "sequence_loss",
]
