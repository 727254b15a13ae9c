"""Entropy-to-temperature mapping and the full token sampling pipeline.

Temperature follows T(eps) = t0 * exp(-eps / alpha) + theta: maximal at zero
entropy, decaying toward the floor theta as entropy grows. The pipeline order
is fixed: guidance combine -> entropy read -> temperature rescale -> top-k ->
top-p -> softmax -> categorical draw.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from entropix import dist
from entropix.rng import RngStream

_EPS_ROUNDOFF = 1e-9


@dataclass(frozen=True)
class TempParams:
    t0: float
    alpha: float
    theta: float

    def __post_init__(self):
        if self.t0 <= 0 or self.alpha <= 0 or self.theta <= 0:
            raise ValueError("t0, alpha and theta must all be positive")


# Published per-model settings.
PRESETS = {
    "llamagen": TempParams(2.5, 3.0, 0.6),
    "lumina-mgpt": TempParams(2.0, 2.5, 0.6),
    "meissonic": TempParams(2.5, 3.0, 0.7),
    "star": TempParams(2.5, 3.0, 0.5),
}


def preset(model_name: str) -> TempParams:
    try:
        return PRESETS[model_name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise ValueError(f"unknown preset {model_name!r}; valid names: {known}") from None


def dynamic_temperature(eps: float, p: TempParams) -> float:
    """Map entropy (nats) to a sampling temperature in (theta, t0 + theta]."""
    if eps < 0:
        if eps < -_EPS_ROUNDOFF:
            raise ValueError("negative entropy")
        eps = 0.0
    return p.t0 * np.exp(-eps / p.alpha) + p.theta


@dataclass(frozen=True)
class SampleTrace:
    token: int
    entropy: float
    temperature: float
    step_index: int
    token_prob: float  # post-pipeline probability of the sampled token


def pipeline_probs(cond_logits,
                   uncond_logits=None,
                   cfg_scale: float = 1.0,
                   tp: TempParams = PRESETS["llamagen"],
                   top_k: Optional[int] = None,
                   top_p: Optional[float] = None,
                   temperature_scale: float = 1.0,
                   floor_temperature: float = 0.05):
    """Run the deterministic half of the pipeline.

    Returns (probs, entropy, applied_temperature). ``temperature_scale``
    multiplies the dynamic temperature (used by scale-wise decoding) and the
    result is clamped at ``floor_temperature``.
    """
    logits = np.asarray(cond_logits, dtype=np.float64)
    if uncond_logits is not None:
        logits = dist.cfg_combine(logits, uncond_logits, cfg_scale)
    p = dist.softmax(logits)
    nz = p[p > 0.0]  # entropy inline: p is valid by construction
    eps = float(-(nz * np.log(nz)).sum())
    t = dynamic_temperature(eps, tp)
    if temperature_scale != 1.0:
        t = max(t * temperature_scale, floor_temperature)
    logits = dist.rescale_logits(logits, t)
    if top_k is not None:
        logits = dist.top_k_filter(logits, top_k)
    if top_p is not None:
        logits = dist.top_p_filter(logits, top_p)
    return dist.softmax(logits), eps, t


def sample_entropy_aware(cond_logits,
                         uncond_logits=None,
                         cfg_scale: float = 1.0,
                         tp: TempParams = PRESETS["llamagen"],
                         top_k: Optional[int] = None,
                         top_p: Optional[float] = None,
                         rng: Optional[RngStream] = None,
                         step_index: int = 0) -> SampleTrace:
    """Sample one token with entropy-adapted temperature; record what was used."""
    if rng is None:
        raise ValueError("an RngStream is required")
    probs, eps, t = pipeline_probs(cond_logits, uncond_logits, cfg_scale,
                                   tp, top_k, top_p)
    token = dist.sample_categorical(probs, rng)
    return SampleTrace(token=token, entropy=eps, temperature=float(t),
                       step_index=step_index, token_prob=float(probs[token]))
