"""osmt: an image-grounded neural machine translation toolkit.

Trains and decodes a two-layer bidirectional-LSTM encoder / attentional-LSTM
decoder translation model, optionally grounded in a pooled image feature
vector (variant ``osu1``; ``osu2`` is the text-only baseline), on top of a
small from-scratch float64 autodiff core.
"""

__version__ = "0.1.0"
