"""Forward passes: bidirectional LSTM encoder, attentional LSTM decoder,
and the image-initialization pathway that distinguishes the two variants.

All functions are pure with respect to parameters; they run under a tape
for training and without one for inference. ``train``/``dropout_rng`` are
threaded explicitly so a fixed rng stream reproduces identical dropout
masks (which the gradient checker relies on).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, ShapeError
from ..numcore import (
    Tensor,
    add,
    concat_last_axis,
    const,
    cross_entropy_with_mask,
    dropout,
    embedding_lookup,
    lstm_cell,
    matmul,
    mul,
    reshape,
    softmax_last_axis,
    stack_axis1,
    tanh,
)
from .config import DECODER_LAYERS, ENCODER_LAYERS
from .params import DIRECTIONS, ModelParams


@dataclass
class EncoderStates:
    annotations: Tensor          # (batch, src_len, 2*hidden)
    src_mask: np.ndarray         # (batch, src_len) 0/1
    finals: dict                 # (layer, direction) -> (h, c) Tensors


@dataclass
class DecoderState:
    layers: tuple                # per layer (h, c) Tensors, each (batch, hidden)
    h_tilde: Tensor              # previous attentional vector (batch, hidden)


def image_to_init_states(params: ModelParams, images: np.ndarray) -> dict:
    """Project a pooled image feature into initial recurrent states.

    Returns ("enc", layer, direction) -> (h, c) and ("dec", layer) -> (h, c),
    each state tanh(W @ image + b) with its own projection.
    """
    config = params.config
    if not config.uses_image:
        raise ConfigError("image initialization requires the osu1 variant")
    images = np.asarray(images, dtype=np.float64)
    if images.ndim != 2 or images.shape[1] != config.d_img:
        raise ShapeError(
            f"image features must be (batch, {config.d_img}), got {images.shape}"
        )
    img = const(images)
    states = {}

    def project(prefix):
        h = tanh(add(matmul(img, params[f"{prefix}_h_w"]), params[f"{prefix}_h_b"]))
        c = tanh(add(matmul(img, params[f"{prefix}_c_w"]), params[f"{prefix}_c_b"]))
        return h, c

    for layer in range(ENCODER_LAYERS):
        for direction in DIRECTIONS:
            states[("enc", layer, direction)] = project(f"img_enc_l{layer}_{direction}")
    for layer in range(DECODER_LAYERS):
        states[("dec", layer)] = project(f"img_dec_l{layer}")
    return states


def _masked_keep(new: Tensor, prev: Tensor, keep: Tensor, drop: Tensor) -> Tensor:
    """new where the position is real, prev where it is padding."""
    return add(mul(new, keep), mul(prev, drop))


def encode(
    params: ModelParams,
    src: np.ndarray,
    src_lengths: np.ndarray,
    images: np.ndarray | None = None,
    train: bool = False,
    dropout_rng: np.random.Generator | None = None,
) -> EncoderStates:
    """Run the stacked bidirectional encoder over a padded source batch.

    Layer 1 starts from image-projected states (osu1) or zeros (osu2);
    layer 2 consumes the dropout-regularized concatenation of layer 1's
    directions. States freeze at padding so finals reflect true sentence
    ends in both directions.
    """
    config = params.config
    batch, src_len = src.shape
    mask = (np.arange(src_len)[None, :] < np.asarray(src_lengths)[:, None]).astype(np.float64)
    keep_cols = [const(mask[:, t : t + 1]) for t in range(src_len)]
    drop_cols = [const(1.0 - mask[:, t : t + 1]) for t in range(src_len)]
    keep_prob = 1.0 - config.dropout_rate

    img_states = None
    if config.uses_image:
        if images is None:
            raise ConfigError("osu1 encoder needs image features")
        img_states = image_to_init_states(params, images)

    zeros = const(np.zeros((batch, config.hidden_dim)))
    inputs = [embedding_lookup(params["src_embed"], src[:, t]) for t in range(src_len)]
    finals = {}
    for layer in range(ENCODER_LAYERS):
        per_direction = {}
        for direction in DIRECTIONS:
            wx = params[f"enc_l{layer}_{direction}_wx"]
            wh = params[f"enc_l{layer}_{direction}_wh"]
            b = params[f"enc_l{layer}_{direction}_b"]
            if img_states is not None:
                h, c = img_states[("enc", layer, direction)]
            else:
                h, c = zeros, zeros
            outputs = [None] * src_len
            steps = range(src_len) if direction == "fwd" else range(src_len - 1, -1, -1)
            for t in steps:
                pre = add(add(matmul(inputs[t], wx), matmul(h, wh)), b)
                h_new, c_new = lstm_cell(pre, c)
                h = _masked_keep(h_new, h, keep_cols[t], drop_cols[t])
                c = _masked_keep(c_new, c, keep_cols[t], drop_cols[t])
                outputs[t] = h
            per_direction[direction] = outputs
            finals[(layer, direction)] = (h, c)
        combined = [
            concat_last_axis([per_direction["fwd"][t], per_direction["bwd"][t]])
            for t in range(src_len)
        ]
        if layer < ENCODER_LAYERS - 1:
            inputs = [dropout(x, keep_prob, dropout_rng, train) for x in combined]
        else:
            annotations = stack_axis1(combined)
    return EncoderStates(annotations, mask, finals)


def decode_init(
    params: ModelParams,
    encoder: EncoderStates,
    images: np.ndarray | None = None,
) -> DecoderState:
    """Initial decoder state: a tanh bridge from the encoder finals per
    layer, plus (osu1) the image-projected state, summed elementwise."""
    config = params.config
    img_states = None
    if config.uses_image:
        if images is None:
            raise ConfigError("osu1 decoder needs image features")
        img_states = image_to_init_states(params, images)
    layers = []
    for layer in range(DECODER_LAYERS):
        h_fwd, c_fwd = encoder.finals[(layer, "fwd")]
        h_bwd, c_bwd = encoder.finals[(layer, "bwd")]
        h_cat = concat_last_axis([h_fwd, h_bwd])
        c_cat = concat_last_axis([c_fwd, c_bwd])
        h = tanh(add(matmul(h_cat, params[f"bridge_l{layer}_h_w"]), params[f"bridge_l{layer}_h_b"]))
        c = tanh(add(matmul(c_cat, params[f"bridge_l{layer}_c_w"]), params[f"bridge_l{layer}_c_b"]))
        if img_states is not None:
            img_h, img_c = img_states[("dec", layer)]
            h = add(h, img_h)
            c = add(c, img_c)
        layers.append((h, c))
    batch = encoder.src_mask.shape[0]
    h_tilde = const(np.zeros((batch, config.hidden_dim)))
    return DecoderState(tuple(layers), h_tilde)


def attention_step(
    params: ModelParams,
    decoder_top_h: Tensor,
    annotations: Tensor,
    src_mask: np.ndarray,
) -> tuple[Tensor, Tensor]:
    """Bilinear-scored global attention over the encoder annotations.

    Returns (context, weights); weights are zero on masked positions and
    sum to one elsewhere.
    """
    batch, src_len, width = annotations.shape
    proj = matmul(decoder_top_h, params["attn_score_w"])            # (batch, 2*hidden)
    scores = matmul(annotations, reshape(proj, (batch, width, 1)))  # (batch, src_len, 1)
    scores = reshape(scores, (batch, src_len))
    weights = softmax_last_axis(scores, mask=src_mask)
    context = matmul(reshape(weights, (batch, 1, src_len)), annotations)
    return reshape(context, (batch, width)), weights


def decode_step(
    params: ModelParams,
    prev_embedding: Tensor,
    state: DecoderState,
    annotations: Tensor,
    src_mask: np.ndarray,
    train: bool = False,
    dropout_rng: np.random.Generator | None = None,
) -> tuple[Tensor, DecoderState, Tensor]:
    """One decoder step with input feeding.

    LSTM input is [token embedding; previous attentional vector]; the new
    attentional vector tanh(W [context; top hidden]) feeds both the output
    projection (through dropout) and the next step's input.
    """
    config = params.config
    keep_prob = 1.0 - config.dropout_rate
    x = concat_last_axis([prev_embedding, state.h_tilde])
    new_layers = []
    inp = x
    for layer in range(DECODER_LAYERS):
        h_prev, c_prev = state.layers[layer]
        pre = add(
            add(matmul(inp, params[f"dec_l{layer}_wx"]), matmul(h_prev, params[f"dec_l{layer}_wh"])),
            params[f"dec_l{layer}_b"],
        )
        h, c = lstm_cell(pre, c_prev)
        new_layers.append((h, c))
        inp = dropout(h, keep_prob, dropout_rng, train) if layer < DECODER_LAYERS - 1 else h
    top_h = new_layers[-1][0]
    context, weights = attention_step(params, top_h, annotations, src_mask)
    combined = concat_last_axis([context, top_h])
    h_tilde = tanh(add(matmul(combined, params["attn_combine_w"]), params["attn_combine_b"]))
    logits = add(
        matmul(dropout(h_tilde, keep_prob, dropout_rng, train), params["out_w"]),
        params["out_b"],
    )
    return logits, DecoderState(tuple(new_layers), h_tilde), weights


def sequence_loss(
    params: ModelParams,
    batch,
    train: bool = False,
    dropout_rng: np.random.Generator | None = None,
    reduction: str = "mean",
) -> tuple[Tensor, float]:
    """Teacher-forced masked cross-entropy over one batch.

    Returns (loss tensor, number of real target tokens). Padding positions
    contribute nothing to the loss or its gradients.
    """
    config = params.config
    images = batch.images if config.uses_image else None
    enc = encode(params, batch.src, batch.src_lengths, images, train, dropout_rng)
    state = decode_init(params, enc, images)
    step_logits = []
    for t in range(batch.tgt_in.shape[1]):
        emb = embedding_lookup(params["tgt_embed"], batch.tgt_in[:, t])
        logits, state, _ = decode_step(
            params, emb, state, enc.annotations, enc.src_mask, train, dropout_rng
        )
        step_logits.append(logits)
    all_logits = stack_axis1(step_logits)
    loss = cross_entropy_with_mask(all_logits, batch.tgt_out, batch.tgt_mask, reduction=reduction)
    return loss, batch.token_count
