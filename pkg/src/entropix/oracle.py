"""Deterministic synthetic logits oracle with a controllable entropy profile.

Each grid position gets hashed base noise in [0, 1) plus a logit gap of
``GAP_MAX * kappa`` on a position-specific target token: kappa = 0 leaves a
near-uniform (high entropy) distribution, kappa = 1 a near-deterministic one.
``context_sensitivity`` blends in noise keyed by a digest of the conditioning
prefix, so logits react to previously decoded tokens; at 0 the oracle is
stationary and prefix-independent.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from entropix.backend import kernels

GAP_MAX = 30.0

POS_SALT = 0xD1B54A32D192ED03
UNCOND_SALT = 0x6A09E667F3BCC909

# Reserved conditioning id for not-yet-decoded grid positions; never emitted.
def mask_token(vocab: int) -> int:
    return vocab


@dataclass(frozen=True)
class OracleConfig:
    vocab: int = 64
    shape: Tuple[int, int] = (16, 16)
    profile: Optional[np.ndarray] = None  # kappa map, defaults to all zeros
    seed: int = 0
    context_sensitivity: float = 0.0

    def __post_init__(self):
        h, w = self.shape
        if self.vocab < 2 or h < 1 or w < 1:
            raise ValueError("vocab must be >= 2 and shape positive")
        if not 0.0 <= self.context_sensitivity <= 1.0:
            raise ValueError("context_sensitivity must be in [0, 1]")
        prof = self.profile
        if prof is None:
            prof = np.zeros(self.shape)
        prof = np.asarray(prof, dtype=np.float64)
        if prof.shape != self.shape:
            raise ValueError("profile shape must match the grid shape")
        if np.any(prof < 0) or np.any(prof > 1):
            raise ValueError("kappa values must lie in [0, 1]")
        object.__setattr__(self, "profile", prof)


def profile_rect(shape: Tuple[int, int], background_kappa: float,
                 foreground_kappa: float,
                 rect: Tuple[int, int, int, int]) -> np.ndarray:
    """Constant-kappa map with a rectangular foreground patch."""
    h, w = shape
    top, left, rh, rw = rect
    for v in (background_kappa, foreground_kappa):
        if not 0.0 <= v <= 1.0:
            raise ValueError("kappa values must lie in [0, 1]")
    if top < 0 or left < 0 or rh < 0 or rw < 0 or top + rh > h or left + rw > w:
        raise ValueError("rect out of bounds")
    prof = np.full(shape, background_kappa)
    prof[top:top + rh, left:left + rw] = foreground_kappa
    return prof


class Oracle:
    """Stateless logits source; every query is a pure function of its inputs."""

    def __init__(self, cfg: OracleConfig):
        self.cfg = cfg
        h, w = cfg.shape
        self._n = h * w
        self._kappa_flat = cfg.profile.reshape(-1)

    def kappa_at(self, linear_pos: int) -> float:
        # positions beyond the grid wrap onto the profile
        return float(self._kappa_flat[linear_pos % self._n])

    def _pos_key(self, linear_pos: int, conditional: bool) -> int:
        key = kernels.mix64((self.cfg.seed ^ kernels.mix64(linear_pos * POS_SALT & ((1 << 64) - 1))) & ((1 << 64) - 1))
        if not conditional:
            key = kernels.mix64(key ^ UNCOND_SALT)
        return key

    def prefix_digest(self, tokens: Sequence[int], indices: Sequence[int]) -> int:
        t = np.asarray(tokens, dtype=np.uint64)
        i = np.asarray(indices, dtype=np.uint64)
        if t.shape != i.shape:
            raise ValueError("tokens and indices must have equal length")
        return kernels.prefix_fold(t, i)

    def logits_at(self, linear_pos: int, prefix_tokens: Sequence[int],
                  prefix_indices: Optional[Sequence[int]] = None,
                  conditional: bool = True,
                  kappa: Optional[float] = None) -> np.ndarray:
        """Length-V logits for one position given conditioning tokens.

        ``prefix_indices`` defaults to 0..len-1 (sequential decoding); grid and
        scale decoders pass explicit linear indices. Entries equal to the
        reserved mask id are dropped from the digest.
        """
        cfg = self.cfg
        if linear_pos < 0:
            raise ValueError("position out of range")
        if prefix_indices is None:
            prefix_indices = range(len(prefix_tokens))
        if self.cfg.context_sensitivity != 0.0:
            digest = self.digest_of(prefix_tokens, prefix_indices)
        else:
            digest = 0
        return self.logits_from_digest(linear_pos, digest, conditional, kappa)

    def digest_of(self, prefix_tokens: Sequence[int],
                  prefix_indices: Optional[Sequence[int]] = None) -> int:
        """Conditioning digest with reserved mask-id entries dropped."""
        if prefix_indices is None:
            prefix_indices = range(len(prefix_tokens))
        mid = mask_token(self.cfg.vocab)
        toks = np.asarray(prefix_tokens, dtype=np.int64)
        idxs = np.asarray(prefix_indices, dtype=np.int64)
        if toks.shape != idxs.shape:
            raise ValueError("tokens and indices must have equal length")
        if toks.size and (toks.min() < 0 or toks.max() > mid):
            raise ValueError("invalid token id in prefix")
        keep = toks != mid
        return kernels.prefix_fold(toks[keep].astype(np.uint64),
                                   idxs[keep].astype(np.uint64))

    def logits_from_digest(self, linear_pos: int, digest: int,
                           conditional: bool = True,
                           kappa: Optional[float] = None) -> np.ndarray:
        """As logits_at, but with the conditioning digest precomputed (the
        digest is shared by every position queried against one frozen grid)."""
        cfg = self.cfg
        if linear_pos < 0:
            raise ValueError("position out of range")
        pk = self._pos_key(linear_pos, conditional)
        c = cfg.context_sensitivity
        ctx = kernels.mix64(pk ^ digest) if c != 0.0 else 0
        if kappa is None:
            kappa = self.kappa_at(linear_pos)
        tstar = pk % cfg.vocab
        return kernels.raw_logits(pk, ctx, c, cfg.vocab, tstar, GAP_MAX * kappa)

    def grid_logits_at(self, pos: Tuple[int, int], grid: np.ndarray,
                       conditional: bool = True) -> np.ndarray:
        """Grid conditioning: decoded entries condition, mask-id entries do not."""
        i, j = pos
        h, w = self.cfg.shape
        if not (0 <= i < h and 0 <= j < w):
            raise ValueError("position out of range")
        flat = np.asarray(grid).reshape(-1)
        return self.logits_at(i * w + j, flat,
                              np.arange(flat.shape[0]), conditional)
