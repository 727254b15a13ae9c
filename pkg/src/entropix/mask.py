"""Mask-prediction decoding: sample every open position each step, keep the
k most confident under Gumbel-perturbed log-probability, repeat until the
grid is full.

Confidence is log(p_sampled) + T * g with g ~ Gumbel(0,1) and T the
per-position dynamic temperature, so low-entropy (high-T) positions compete
with noisier scores.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from entropix import dist
from entropix.oracle import Oracle, mask_token
from entropix.rng import RngStream
from entropix.temperature import TempParams, sample_entropy_aware


@dataclass(frozen=True)
class StepSchedule:
    total_tokens: int
    counts: Tuple[int, ...]

    def __post_init__(self):
        if sum(self.counts) != self.total_tokens or any(k < 1 for k in self.counts):
            raise ValueError("schedule must conserve tokens with every count >= 1")

    @property
    def total_steps(self) -> int:
        return len(self.counts)


def cosine_schedule(total_tokens: int, total_steps: int) -> StepSchedule:
    """Cosine acceptance schedule: few tokens early, most in the late steps.

    Integer counts come from largest-remainder apportionment of the cosine
    increments; zeros are bumped to 1 by stealing from the largest step and
    the counts are ordered ascending so k_t never decreases.
    """
    if total_steps < 1 or total_tokens < 1:
        raise ValueError("total_tokens and total_steps must be positive")
    if total_steps > total_tokens:
        raise ValueError("more steps than tokens")
    t = np.arange(total_steps + 1) / total_steps
    cum = 1.0 - np.cos(t * np.pi / 2.0)
    ideal = np.diff(cum) * total_tokens
    counts = np.floor(ideal).astype(int)
    rem = ideal - counts
    for i in np.argsort(-rem, kind="stable")[: total_tokens - counts.sum()]:
        counts[i] += 1
    while np.any(counts == 0):
        counts[int(np.argmax(counts == 0))] += 1
        counts[int(np.argmax(counts))] -= 1
    counts.sort()
    return StepSchedule(total_tokens, tuple(int(k) for k in counts))


@dataclass
class MaskState:
    accepted: np.ndarray  # bool grid
    tokens: np.ndarray  # int grid, valid where accepted
    step: int
    total_steps: int

    @classmethod
    def initial(cls, shape: Tuple[int, int], total_steps: int) -> "MaskState":
        return cls(accepted=np.zeros(shape, dtype=bool),
                   tokens=np.zeros(shape, dtype=np.int64),
                   step=0, total_steps=total_steps)

    def remaining(self) -> int:
        return int((~self.accepted).sum())


def confidence(p_sampled: float, temperature: float, rng: RngStream) -> float:
    if p_sampled <= 0 or p_sampled > 1:
        raise ValueError("sampled probability must be in (0, 1]")
    if temperature <= 0:
        raise ValueError("nonpositive temperature")
    return float(np.log(p_sampled)) + temperature * dist.gumbel_noise(rng)


def update_mask(conf: np.ndarray, state: MaskState, k: int,
                sampled_tokens: Optional[np.ndarray] = None) -> MaskState:
    """Accept the k highest-confidence open positions (row-major tie-break).

    ``sampled_tokens`` supplies the token values written at newly accepted
    positions; already accepted positions are never touched.
    """
    if k < 1 or k > state.remaining():
        raise ValueError("k must be in [1, remaining positions]")
    scores = np.where(state.accepted, -np.inf, conf).reshape(-1)
    order = np.argsort(-scores, kind="stable")  # ties: lower flat index first
    chosen = order[:k]
    accepted = state.accepted.copy()
    tokens = state.tokens.copy()
    flat_acc = accepted.reshape(-1)
    flat_acc[chosen] = True
    if sampled_tokens is not None:
        tokens.reshape(-1)[chosen] = np.asarray(sampled_tokens).reshape(-1)[chosen]
    return MaskState(accepted=accepted, tokens=tokens,
                     step=state.step + 1, total_steps=state.total_steps)


def mask_generate(oracle: Oracle, shape: Tuple[int, int],
                  schedule: StepSchedule, tp: TempParams, rng: RngStream,
                  top_k: Optional[int] = None, top_p: Optional[float] = None,
                  cfg_scale: float = 1.0):
    """Full mask-prediction loop.

    Returns (token grid, entropy map recorded at each position's acceptance
    step, list of MaskState snapshots, applied-temperature list).
    """
    h, w = shape
    if schedule.total_tokens != h * w:
        raise ValueError("schedule does not match the grid size")
    state = MaskState.initial(shape, schedule.total_steps)
    entropy_map = np.zeros(shape)
    temps: List[float] = []
    history = [state]
    mid = mask_token(oracle.cfg.vocab)
    for k_t in schedule.counts:
        grid_cond = np.where(state.accepted, state.tokens, mid)
        # the conditioning digest is shared by every open position this step
        digest = oracle.digest_of(grid_cond.reshape(-1))
        conf = np.full(shape, -np.inf)
        drafts = np.zeros(shape, dtype=np.int64)
        step_eps = np.zeros(shape)
        for i in range(h):
            for j in range(w):
                if state.accepted[i, j]:
                    continue
                logits = oracle.logits_from_digest(i * w + j, digest)
                uncond = None
                if cfg_scale != 1.0:
                    uncond = oracle.logits_from_digest(i * w + j, digest,
                                                       conditional=False)
                trace = sample_entropy_aware(logits, uncond, cfg_scale, tp,
                                             top_k, top_p, rng,
                                             step_index=state.step)
                drafts[i, j] = trace.token
                step_eps[i, j] = trace.entropy
                conf[i, j] = confidence(trace.token_prob, trace.temperature, rng)
                temps.append(trace.temperature)
        newly = ~state.accepted
        state = update_mask(conf, state, k_t, sampled_tokens=drafts)
        newly &= state.accepted
        entropy_map[newly] = step_eps[newly]
        history.append(state)
    assert state.accepted.all()
    return state.tokens.copy(), entropy_map, history, temps
