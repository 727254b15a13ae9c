"""Coarse-to-fine decoding over a ladder of grid resolutions.

Per-scale temperature decays linearly around the middle scale:
T_s = T * (1 - beta * (s - S // 2)), clamped at a small positive floor since
the linear form goes negative for late scales.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from entropix.oracle import Oracle
from entropix.rng import RngStream
from entropix.temperature import TempParams, pipeline_probs
from entropix import dist

# Position-key stride separating scales in the oracle's index space.
SCALE_STRIDE = 1 << 24


@dataclass(frozen=True)
class ScaleTempParams:
    beta: float
    s_count: int
    floor_temperature: float = 0.05

    def __post_init__(self):
        if not 0.0 <= self.beta < 1.0:
            raise ValueError("beta must be in [0, 1)")
        if self.s_count < 1:
            raise ValueError("need at least one scale")
        if self.floor_temperature <= 0:
            raise ValueError("floor_temperature must be positive")


def scale_temperature(temperature: float, s: int, sp: ScaleTempParams) -> float:
    """Decayed temperature for 1-based scale index s; always > 0."""
    if not 1 <= s <= sp.s_count:
        raise ValueError("scale index out of range")
    if temperature <= 0:
        raise ValueError("nonpositive temperature")
    raw = temperature * (1.0 - sp.beta * (s - sp.s_count // 2))
    return max(raw, sp.floor_temperature)


def scale_factor(s: int, sp: ScaleTempParams) -> float:
    """Multiplier applied to the dynamic temperature at scale s (unclamped)."""
    if not 1 <= s <= sp.s_count:
        raise ValueError("scale index out of range")
    return 1.0 - sp.beta * (s - sp.s_count // 2)


def scale_generate(oracle: Oracle, ladder: Sequence[Tuple[int, int]],
                   tp: TempParams, sp: ScaleTempParams, rng: RngStream,
                   top_k: Optional[int] = None, top_p: Optional[float] = None,
                   cfg_scale: float = 1.0):
    """Decode every scale in ladder order, each conditioned on all coarser ones.

    Returns (list of token grids, list of entropy maps, per-scale mean entropy,
    applied-temperature list).
    """
    if len(ladder) == 0:
        raise ValueError("ladder must be nonempty")
    if len(ladder) != sp.s_count:
        raise ValueError("ladder length must equal the scale count")
    grids: List[np.ndarray] = []
    entropy_maps: List[np.ndarray] = []
    mean_entropy: List[float] = []
    temps: List[float] = []
    prefix_tokens: List[int] = []
    prefix_indices: List[int] = []
    ph, pw = oracle.cfg.shape
    for s, (h, w) in enumerate(ladder, start=1):
        if h < 1 or w < 1:
            raise ValueError("invalid scale shape")
        factor = scale_factor(s, sp)
        grid = np.zeros((h, w), dtype=np.int64)
        emap = np.zeros((h, w))
        base = s * SCALE_STRIDE
        for i in range(h):
            for j in range(w):
                pos = base + i * w + j
                # sample the profile at the matching relative location
                kappa = oracle.kappa_at((i * ph // h) * pw + (j * pw // w))
                logits = oracle.logits_at(pos, prefix_tokens, prefix_indices,
                                          kappa=kappa)
                uncond = None
                if cfg_scale != 1.0:
                    uncond = oracle.logits_at(pos, prefix_tokens, prefix_indices,
                                              conditional=False, kappa=kappa)
                probs, eps, t = pipeline_probs(
                    logits, uncond, cfg_scale, tp, top_k, top_p,
                    temperature_scale=factor,
                    floor_temperature=sp.floor_temperature)
                grid[i, j] = dist.sample_categorical(probs, rng)
                emap[i, j] = eps
                temps.append(t)
        for i in range(h):
            for j in range(w):
                prefix_tokens.append(int(grid[i, j]))
                prefix_indices.append(base + i * w + j)
        grids.append(grid)
        entropy_maps.append(emap)
        mean_entropy.append(float(emap.mean()))
    return grids, entropy_maps, mean_entropy, temps
