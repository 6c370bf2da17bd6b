"""Vectorised numpy implementations of the state-space kernels.

State encodings shared with the numba backend:

* Boolean configuration: integer ``x`` with bit ``i`` equal to ``x_i``.
* MP configuration: ``s = v | (tm << n)`` where ``tm`` marks transient
  variables and ``v`` carries the Boolean value, or the target value
  (1 for increasing, 0 for decreasing) on transient positions.
"""

from __future__ import annotations

import numpy as np

FA, SYN, GA = 0, 1, 2


def exists_tables(tt: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For every local function and MP state, whether some binarisation maps it to 0 / to 1.

    ``tt`` has shape ``(n, 2**n)``. Returns two ``uint8`` arrays of shape ``(n, 4**n)``.
    """
    n = tt.shape[0]
    size = 1 << n
    v = np.arange(size, dtype=np.int64)
    one = np.zeros((n, size, size), dtype=np.uint8)
    zero = np.zeros((n, size, size), dtype=np.uint8)
    one[:, 0, :] = tt
    zero[:, 0, :] = 1 - tt
    for tm in range(1, size):
        b = tm & -tm
        rest = tm ^ b
        lo = v & ~b
        hi = v | b
        one[:, tm, :] = one[:, rest, lo] | one[:, rest, hi]
        zero[:, tm, :] = zero[:, rest, lo] | zero[:, rest, hi]
    return zero.reshape(n, size * size), one.reshape(n, size * size)


def mp_reach(e0: np.ndarray, e1: np.ndarray, n: int, s0: int) -> np.ndarray:
    """Visited flags over all ``4**n`` MP states reachable from ``s0``."""
    full = 1 << n
    visited = np.zeros(full * full, dtype=np.uint8)
    visited[s0] = 1
    frontier = np.array([s0], dtype=np.int64)
    while frontier.size:
        v = frontier & (full - 1)
        tm = frontier >> n
        cands = []
        for i in range(n):
            b = 1 << i
            trans = (tm & b) != 0
            val = (v & b) != 0
            can0 = e0[i, frontier] != 0
            can1 = e1[i, frontier] != 0
            # collapse a transient onto its target
            cands.append(frontier[trans] & ~(b << n))
            # up -> down, down -> up
            flip = trans & np.where(val, can0, can1)
            cands.append(frontier[flip] ^ b)
            # 0 -> up, 1 -> down
            rise = ~trans & ~val & can1
            cands.append(frontier[rise] | b | (b << n))
            fall = ~trans & val & can0
            cands.append((frontier[fall] & ~b) | (b << n))
        nxt = np.unique(np.concatenate(cands))
        nxt = nxt[visited[nxt] == 0]
        visited[nxt] = 1
        frontier = nxt
    return visited


def async_reach(image: np.ndarray, n: int, x0: int, mode: int) -> np.ndarray:
    """Visited flags over ``2**n`` configurations under fa / syn / ga updates."""
    size = 1 << n
    visited = np.zeros(size, dtype=np.uint8)
    visited[x0] = 1
    frontier = np.array([x0], dtype=np.int64)
    masks = np.arange(size, dtype=np.int64)
    while frontier.size:
        if mode == SYN:
            nxt = image[frontier]
        else:
            diff = image[frontier] ^ frontier
            if mode == FA:
                bits = np.int64(1) << np.arange(n, dtype=np.int64)
                ok = (diff[:, None] & bits[None, :]) != 0
                nxt = (frontier[:, None] ^ bits[None, :])[ok]
            else:
                ok = (masks[None, :] & ~diff[:, None]) == 0
                nxt = (frontier[:, None] ^ masks[None, :])[ok]
        nxt = np.unique(nxt)
        nxt = nxt[visited[nxt] == 0]
        visited[nxt] = 1
        frontier = nxt
    return visited
