"""Pure-numpy kernels for the synthetic logits oracle.

Bit-identical to the compiled versions in ``_kernels_c``: the hash is plain
splitmix64 over wrapping 64-bit arithmetic and the float mapping is a single
multiply by 2^-64, so both backends produce the same doubles.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX_M1 = 0xBF58476D1CE4E5B9
MIX_M2 = 0x94D049BB133111EB

TOK_SALT = 0x8CB92BA72F3D8DD7
CTX_SALT = 0xABCC79579A4E1CBB
FOLD_TOK = 0x9E3779B97F4A7C15
FOLD_IDX = 0xC2B2AE3D27D4EB4F
FOLD_INIT = 0x243F6A8885A308D3

_INV_2_64 = 2.0 ** -64

_U = np.uint64


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit value."""
    z = (z + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * MIX_M1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_M2) & MASK64
    return z ^ (z >> 31)


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    z = z + _U(GOLDEN)
    z = (z ^ (z >> _U(30))) * _U(MIX_M1)
    z = (z ^ (z >> _U(27))) * _U(MIX_M2)
    return z ^ (z >> _U(31))


def prefix_fold(tokens: np.ndarray, indices: np.ndarray) -> int:
    """Order-independent 64-bit digest of (token, position) pairs."""
    if len(tokens) == 0:
        return mix64(FOLD_INIT)
    t = tokens.astype(np.uint64)
    i = indices.astype(np.uint64)
    h = _mix64_vec(t * _U(FOLD_TOK) + i * _U(FOLD_IDX))
    acc = _U(FOLD_INIT)
    acc = acc ^ np.bitwise_xor.reduce(h)
    return mix64(int(acc))


def raw_logits(pos_key: int, ctx_key: int, c: float, vocab: int,
               tstar: int, gap: float) -> np.ndarray:
    """Deterministic base logits: hashed noise plus a gap on the target token."""
    k = np.arange(vocab, dtype=np.uint64)
    u = _mix64_vec(_U(pos_key) + k * _U(TOK_SALT)).astype(np.float64) * _INV_2_64
    if c != 0.0:
        u2 = _mix64_vec(_U(ctx_key) + k * _U(CTX_SALT)).astype(np.float64) * _INV_2_64
        u = (1.0 - c) * u + c * u2
    out = u
    out[tstar] = out[tstar] + gap
    return out
