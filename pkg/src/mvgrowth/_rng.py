"""Counter-based, seed-deterministic normal variates.

Every row of output occupies its own run of Philox counter blocks, so row
``j`` of a stream is reproducible in isolation (``start=j``) and a longer
draw always extends a shorter one.  Normals come from Box-Muller on the raw
64-bit outputs, which keeps the mapping independent of numpy's samplers.
"""

from __future__ import annotations

import numpy as np

_WORDS_PER_BLOCK = 4
_TWO_PI = 2.0 * np.pi

# stream tags, keep distinct per consumer
REFERENCE = 1
DIRECTIONS = 2


def _key(seed: int, *path: int) -> int:
    words = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *path]).generate_state(2, np.uint64)
    return int(words[0]) | (int(words[1]) << 64)


def normals(seed: int, path: tuple[int, ...], rows: int, width: int, start: int = 0) -> np.ndarray:
    """Standard normals of shape ``(rows, width)`` for stream ``(seed, *path)``.

    Rows ``start .. start + rows - 1`` of the stream are returned.
    """
    pairs = (width + 1) // 2
    blocks_per_row = -(-2 * pairs // _WORDS_PER_BLOCK)
    gen = np.random.Philox(key=_key(seed, *path))
    if start:
        gen.advance(start * blocks_per_row)
    raw = gen.random_raw(rows * blocks_per_row * _WORDS_PER_BLOCK)
    raw = raw.reshape(rows, blocks_per_row * _WORDS_PER_BLOCK)[:, : 2 * pairs]
    # open interval (0, 1): no log(0), no zero radius
    u = ((raw >> np.uint64(11)).astype(float) + 0.5) * 2.0**-53
    u1, u2 = u[:, 0::2], u[:, 1::2]
    radius = np.sqrt(-2.0 * np.log(u1))
    z = np.empty((rows, 2 * pairs))
    z[:, 0::2] = radius * np.cos(_TWO_PI * u2)
    z[:, 1::2] = radius * np.sin(_TWO_PI * u2)
    return z[:, :width]


def unit_vectors(seed: int, count: int, p: int, start: int = 0) -> np.ndarray:
    """``count`` directions uniform on the unit sphere in R^p."""
    z = normals(seed, (DIRECTIONS, p), count, p, start=start)
    norms = np.sqrt((z * z).sum(axis=1))
    bad = norms == 0.0
    if np.any(bad):
        z[bad] = 0.0
        z[bad, 0] = 1.0
        norms[bad] = 1.0
    return z / norms[:, None]
