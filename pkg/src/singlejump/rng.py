"""Counter-based uniforms (Philox4x32-10).

The stream for path ``i`` under seed ``s`` is a pure function of (s, i), so
any split of the paths across workers reproduces the same draws.
"""

import numpy as np

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint32(0x9E3779B9)
_W1 = np.uint32(0xBB67AE85)
_LO = np.uint64(0xFFFFFFFF)
_SHIFT = np.uint64(32)


def _mulhilo(m, x):
    p = m * x.astype(np.uint64)
    return (p >> _SHIFT).astype(np.uint32), (p & _LO).astype(np.uint32)


def philox4x32(counter, key, rounds=10):
    """Philox4x32 block function.

    Parameters
    ----------
    counter : (n, 4) uint32 array
    key : (2,) or (n, 2) uint32 array

    Returns
    -------
    (n, 4) uint32 array
    """
    c = np.array(counter, dtype=np.uint32, ndmin=2)
    k = np.broadcast_to(np.array(key, dtype=np.uint32), (c.shape[0], 2))
    c0, c1, c2, c3 = (c[:, j].copy() for j in range(4))
    k0, k1 = k[:, 0].copy(), k[:, 1].copy()
    with np.errstate(over="ignore"):
        for r in range(rounds):
            if r:
                k0 = k0 + _W0
                k1 = k1 + _W1
            hi0, lo0 = _mulhilo(_M0, c0)
            hi1, lo1 = _mulhilo(_M1, c2)
            c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return np.stack([c0, c1, c2, c3], axis=1)


def _key(seed):
    seed = int(seed)
    if seed < 0 or seed >= 2 ** 64:
        raise ValueError("seed must lie in [0, 2**64)")
    return np.array([seed & 0xFFFFFFFF, seed >> 32], dtype=np.uint32)


def path_uniforms(seed, start, stop, stream=0):
    """Two uniforms in (0, 1) per path index in [start, stop).

    Returns an ``(stop - start, 2)`` float array with 53 random bits each.
    """
    idx = np.arange(start, stop, dtype=np.uint64)
    ctr = np.zeros((idx.size, 4), dtype=np.uint32)
    ctr[:, 0] = (idx & _LO).astype(np.uint32)
    ctr[:, 1] = (idx >> _SHIFT).astype(np.uint32)
    ctr[:, 2] = np.uint32(stream)
    w = philox4x32(ctr, _key(seed)).astype(np.float64)
    a = np.floor(w[:, 0::2] / 32.0)  # top 27 bits
    b = np.floor(w[:, 1::2] / 64.0)  # top 26 bits
    return (a * 67108864.0 + b + 0.5) / 9007199254740992.0
