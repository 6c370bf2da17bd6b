"""numba-compiled kernels; same contracts as :mod:`mpcpn.kernels._numpy`."""

from __future__ import annotations

import numpy as np
from numba import njit

FA, SYN, GA = 0, 1, 2


@njit(cache=True)
def exists_tables(tt):
    n = tt.shape[0]
    size = 1 << n
    zero = np.zeros((n, size * size), dtype=np.uint8)
    one = np.zeros((n, size * size), dtype=np.uint8)
    for i in range(n):
        for v in range(size):
            one[i, v] = tt[i, v]
            zero[i, v] = 1 - tt[i, v]
        for tm in range(1, size):
            b = tm & -tm
            rest = tm ^ b
            base = tm * size
            rbase = rest * size
            for v in range(size):
                lo = rbase + (v & ~b)
                hi = rbase + (v | b)
                one[i, base + v] = one[i, lo] | one[i, hi]
                zero[i, base + v] = zero[i, lo] | zero[i, hi]
    return zero, one


@njit(cache=True)
def _push(t, visited, queue, tail):
    if visited[t] == 0:
        visited[t] = 1
        queue[tail] = t
        tail += 1
    return tail


@njit(cache=True)
def mp_reach(e0, e1, n, s0):
    full = 1 << n
    total = full * full
    visited = np.zeros(total, dtype=np.uint8)
    queue = np.empty(total, dtype=np.int64)
    visited[s0] = 1
    queue[0] = s0
    head = 0
    tail = 1
    while head < tail:
        s = queue[head]
        head += 1
        v = s & (full - 1)
        tm = s >> n
        for i in range(n):
            b = 1 << i
            high = (v & b) != 0
            if (tm & b) != 0:
                tail = _push(s & ~(b << n), visited, queue, tail)
                if (high and e0[i, s] != 0) or (not high and e1[i, s] != 0):
                    tail = _push(s ^ b, visited, queue, tail)
            elif high:
                if e0[i, s] != 0:
                    tail = _push((s & ~b) | (b << n), visited, queue, tail)
            elif e1[i, s] != 0:
                tail = _push(s | b | (b << n), visited, queue, tail)
    return visited


@njit(cache=True)
def async_reach(image, n, x0, mode):
    size = 1 << n
    visited = np.zeros(size, dtype=np.uint8)
    queue = np.empty(size, dtype=np.int64)
    visited[x0] = 1
    queue[0] = x0
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        if mode == SYN:
            tail = _push(image[x], visited, queue, tail)
            continue
        diff = image[x] ^ x
        if mode == FA:
            for i in range(n):
                b = 1 << i
                if diff & b:
                    tail = _push(x ^ b, visited, queue, tail)
        else:
            sub = diff
            while True:
                tail = _push(x ^ sub, visited, queue, tail)
                if sub == 0:
                    break
                sub = (sub - 1) & diff
    return visited
