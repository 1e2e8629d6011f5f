"""JIT-compiled kernels for the hot loops.

Each function mirrors its numpy_backend twin exactly: identical
accumulation order (scalar left-to-right sums) and identical
first-occurrence tie-breaking, so both backends produce identical
outputs from identical inputs.
"""

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def _construct_tours(weights, starts, uniforms, orders):
    k, n = orders.shape
    visited = np.zeros(n, dtype=np.bool_)
    for a in range(k):
        visited[:] = False
        cur = starts[a]
        visited[cur] = True
        orders[a, 0] = cur
        for t in range(1, n):
            total = 0.0
            for j in range(n):
                if not visited[j]:
                    total += weights[cur, j]
            threshold = uniforms[a, t - 1] * total
            acc = 0.0
            nxt = -1
            last = -1
            for j in range(n):
                if not visited[j]:
                    last = j
                    acc += weights[cur, j]
                    if acc > threshold:
                        nxt = j
                        break
            if nxt < 0:
                nxt = last
            visited[nxt] = True
            orders[a, t] = nxt
            cur = nxt


def construct_tours(weights, starts, uniforms):
    """Same contract as numpy_backend.construct_tours."""
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    starts = np.ascontiguousarray(starts, dtype=np.int64)
    uniforms = np.ascontiguousarray(uniforms, dtype=np.float64)
    orders = np.empty((starts.shape[0], weights.shape[0]), dtype=np.int64)
    _construct_tours(weights, starts, uniforms, orders)
    return orders


@njit(cache=True)
def _brute_force(dist):
    n = dist.shape[0]
    best_order = np.arange(n)
    if n == 2:
        return best_order, dist[0, 1] * 2.0
    perm = np.arange(n)
    best_len = np.inf
    while True:
        if perm[1] < perm[n - 1]:
            length = 0.0
            for t in range(n - 1):
                length += dist[perm[t], perm[t + 1]]
            length += dist[perm[n - 1], perm[0]]
            if length < best_len:
                best_len = length
                best_order[:] = perm
        # next lexicographic permutation of perm[1:]
        i = n - 2
        while i >= 1 and perm[i] >= perm[i + 1]:
            i -= 1
        if i < 1:
            break
        j = n - 1
        while perm[j] <= perm[i]:
            j -= 1
        perm[i], perm[j] = perm[j], perm[i]
        lo, hi = i + 1, n - 1
        while lo < hi:
            perm[lo], perm[hi] = perm[hi], perm[lo]
            lo += 1
            hi -= 1
    return best_order, best_len


def brute_force(dist):
    """Same contract as numpy_backend.brute_force."""
    order, length = _brute_force(np.ascontiguousarray(dist, dtype=np.float64))
    return order.astype(np.int64), float(length)


@njit(cache=True)
def _held_karp(dist):
    n = dist.shape[0]
    size = 1 << n
    dp = np.full((size, n), np.inf)
    parent = np.full((size, n), -1, dtype=np.int8)
    dp[1, 0] = 0.0
    for mask in range(3, size, 2):
        for j in range(1, n):
            if mask & (1 << j) == 0:
                continue
            sub = mask ^ (1 << j)
            best = np.inf
            arg = -1
            for k in range(n):
                if sub & (1 << k):
                    c = dp[sub, k] + dist[k, j]
                    if c < best:
                        best = c
                        arg = k
            dp[mask, j] = best
            parent[mask, j] = arg
    full = size - 1
    best_len = np.inf
    last = -1
    for j in range(1, n):
        c = dp[full, j] + dist[j, 0]
        if c < best_len:
            best_len = c
            last = j
    order = np.empty(n, dtype=np.int64)
    pos = n - 1
    mask = full
    cur = last
    while cur != 0:
        order[pos] = cur
        pos -= 1
        nmask = mask ^ (1 << cur)
        cur = int(parent[mask, cur])  # widen from the int8 parent table
        mask = nmask
    order[0] = 0
    return order, best_len


def held_karp(dist):
    """Same contract as numpy_backend.held_karp."""
    order, length = _held_karp(np.ascontiguousarray(dist, dtype=np.float64))
    return order, float(length)
