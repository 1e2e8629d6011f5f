"""Pure-numpy kernels: the reference semantics for the numba backend.

Cumulative sums are used instead of np.sum so every reduction is a
left-to-right accumulation, matching the scalar loops in the numba twin
bit for bit.  Tie-breaks are first-occurrence everywhere.
"""

import itertools

import numpy as np

NAME = "numpy"

_BF_CHUNK = 1 << 16


def construct_tours(weights, starts, uniforms):
    """Build one tour per start node by roulette selection on fixed weights.

    weights[i, j] is the attractiveness of the move i -> j for this
    iteration (zero diagonal); uniforms holds the n-1 roulette draws per
    tour.  Each step picks the first unvisited node whose running weight
    sum exceeds u * total; if rounding leaves none, the last unvisited
    node is taken.
    """
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    starts = np.asarray(starts, dtype=np.int64)
    uniforms = np.asarray(uniforms, dtype=np.float64)
    n = weights.shape[0]
    k = starts.shape[0]
    orders = np.empty((k, n), dtype=np.int64)
    for a in range(k):
        visited = np.zeros(n, dtype=bool)
        cur = int(starts[a])
        visited[cur] = True
        orders[a, 0] = cur
        for t in range(1, n):
            w = np.where(visited, 0.0, weights[cur])
            cum = np.cumsum(w)
            threshold = uniforms[a, t - 1] * cum[-1]
            nxt = int(np.searchsorted(cum, threshold, side="right"))
            if nxt >= n:
                nxt = int(np.flatnonzero(~visited)[-1])
            visited[nxt] = True
            orders[a, t] = nxt
            cur = nxt
    return orders


def brute_force(dist):
    """Optimal tour by enumerating every cycle once (node 0 fixed first,
    orientation canonicalized by order[1] < order[-1]); among optima the
    lexicographically smallest order wins."""
    n = dist.shape[0]
    if n == 2:
        return np.array([0, 1], dtype=np.int64), float(dist[0, 1] * 2.0)
    best_len = np.inf
    best_order = None
    perms = itertools.permutations(range(1, n))
    while True:
        chunk = list(itertools.islice(perms, _BF_CHUNK))
        if not chunk:
            break
        tails = np.array(chunk, dtype=np.int64)
        tails = tails[tails[:, 0] < tails[:, -1]]
        if tails.shape[0] == 0:
            continue
        orders = np.concatenate(
            [np.zeros((tails.shape[0], 1), dtype=np.int64), tails], axis=1)
        lengths = np.cumsum(dist[orders, np.roll(orders, -1, axis=1)], axis=1)[:, -1]
        idx = int(np.argmin(lengths))
        if lengths[idx] < best_len:
            best_len = float(lengths[idx])
            best_order = orders[idx].copy()
    return best_order, best_len


def held_karp(dist):
    """Optimal tour via dynamic programming over visited-node subsets."""
    n = dist.shape[0]
    size = 1 << n
    dp = np.full((size, n), np.inf)
    parent = np.full((size, n), -1, dtype=np.int8)
    dp[1, 0] = 0.0
    bits = 1 << np.arange(n, dtype=np.int64)
    dist_t = np.ascontiguousarray(dist.T)
    for mask in range(3, size, 2):  # masks containing node 0
        members = np.flatnonzero(mask & bits)
        js = members[members != 0]
        if js.size == 0:
            continue
        subs = mask ^ bits[js]
        cand = dp[subs] + dist_t[js]          # cand[j_row, k] = dp[sub, k] + dist[k, j]
        ks = np.argmin(cand, axis=1)
        dp[mask, js] = cand[np.arange(js.size), ks]
        parent[mask, js] = ks
    full = size - 1
    closing = dp[full, 1:] + dist_t[0, 1:]
    last = int(np.argmin(closing)) + 1
    best_len = float(closing[last - 1])
    order_rev = []
    mask, cur = full, last
    while cur != 0:
        order_rev.append(cur)
        nmask = mask ^ (1 << cur)
        cur = int(parent[mask, cur])
        mask = nmask
    order = np.array([0] + order_rev[::-1], dtype=np.int64)
    return order, best_len
