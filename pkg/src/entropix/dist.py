"""Categorical distribution primitives over a discrete codebook.

A distribution is a length-V float64 logits vector. Filters mark removed
entries with ``EXCLUDED`` (-inf), which softmax maps to exactly zero, so
filters compose without special cases. All logarithms are natural.
"""

import numpy as np

from entropix.rng import RngStream

EXCLUDED = -np.inf

PROB_SUM_TOL = 1e-9

GUMBEL_CLIP = 1e-12


def as_logits(values) -> np.ndarray:
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 1 or a.shape[0] < 1:
        raise ValueError("logits must be a 1-D vector")
    return a


def softmax(logits) -> np.ndarray:
    """Stabilized softmax; EXCLUDED entries get probability exactly 0."""
    a = as_logits(logits)
    m = a.max()
    if not np.isfinite(m):
        raise ValueError("empty support")
    e = np.exp(a - m)  # EXCLUDED -> exp(-inf) = 0
    return e / e.sum()


def validate_probs(probs) -> np.ndarray:
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim != 1 or p.size < 1 or p.min() < 0 \
            or abs(p.sum() - 1.0) > PROB_SUM_TOL:
        raise ValueError("invalid distribution")
    return p


def entropy(probs) -> float:
    """Shannon entropy in nats, with the 0*log(0) = 0 convention."""
    p = validate_probs(probs)
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def rescale_logits(logits, temperature: float) -> np.ndarray:
    if temperature <= 0:
        raise ValueError("nonpositive temperature")
    a = as_logits(logits)
    return a / temperature  # EXCLUDED stays -inf


def top_k_filter(logits, k: int) -> np.ndarray:
    """Keep the k highest logits; ties at the cut keep the lower index."""
    a = as_logits(logits)
    if k < 1:
        raise ValueError("top-k requires k >= 1")
    if k >= a.shape[0]:
        return a.copy()
    # stable sort on the negated vector: equal logits rank lower-index first
    order = np.argsort(-a, kind="stable")
    out = np.full_like(a, EXCLUDED)
    keep = order[:k]
    out[keep] = a[keep]
    return out


def top_p_filter(logits, p: float) -> np.ndarray:
    """Keep the smallest high-probability prefix with cumulative mass >= p."""
    a = as_logits(logits)
    if not 0.0 < p <= 1.0:
        raise ValueError("top-p requires p in (0, 1]")
    if p == 1.0:
        return a.copy()
    probs = softmax(a)
    order = np.argsort(-probs, kind="stable")
    cum = np.cumsum(probs[order])
    cut = int(np.searchsorted(cum, p, side="left")) + 1
    out = np.full_like(a, EXCLUDED)
    keep = order[:cut]
    out[keep] = a[keep]
    return out


def cfg_combine(cond, uncond, scale: float) -> np.ndarray:
    """Guidance combination: uncond + scale * (cond - uncond)."""
    c = as_logits(cond)
    u = as_logits(uncond)
    if c.shape != u.shape:
        raise ValueError("mismatched vocabulary sizes")
    if not (np.all(np.isfinite(c)) and np.all(np.isfinite(u))):
        raise ValueError("guidance inputs must have no excluded entries")
    return u + scale * (c - u)


def sample_categorical(probs, rng: RngStream) -> int:
    """Inverse-CDF draw over ascending index order (bit-exact contract)."""
    p = validate_probs(probs)
    u = rng.uniform()
    cum = np.cumsum(p)
    idx = int(np.searchsorted(cum, u, side="right"))
    # guard the top edge: cum[-1] may be 1 - eps, and trailing zero-mass
    # entries must never be returned
    if idx >= p.shape[0]:
        idx = p.shape[0] - 1
    while idx > 0 and p[idx] == 0.0:
        idx -= 1
    return idx


def gumbel_noise(rng: RngStream) -> float:
    """Standard Gumbel(0,1) via -log(-log(u)), u clamped away from {0, 1}."""
    u = rng.uniform()
    u = min(max(u, GUMBEL_CLIP), 1.0 - GUMBEL_CLIP)
    return float(-np.log(-np.log(u)))
