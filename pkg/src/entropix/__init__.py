"""Entropy-informed decoding toolkit for discrete autoregressive generation."""

from entropix.dist import (EXCLUDED, cfg_combine, entropy, gumbel_noise,
                           rescale_logits, sample_categorical, softmax,
                           top_k_filter, top_p_filter)
from entropix.rng import RngStream
from entropix.temperature import (PRESETS, SampleTrace, TempParams,
                                  dynamic_temperature, preset,
                                  sample_entropy_aware)

__version__ = "0.1.0"

__all__ = [
    "EXCLUDED", "PRESETS", "RngStream", "SampleTrace", "TempParams",
    "cfg_combine", "dynamic_temperature", "entropy", "gumbel_noise",
    "preset", "rescale_logits", "sample_categorical", "sample_entropy_aware",
    "softmax", "top_k_filter", "top_p_filter",
]
