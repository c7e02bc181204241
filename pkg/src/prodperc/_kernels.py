"""Compiled inner loops."""

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def uf_find(parent, x):
    # path halving
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@numba.njit(cache=True, nogil=True)
def uf_union_edges(parent, size, us, vs):
    for i in range(us.shape[0]):
        a = uf_find(parent, us[i])
        b = uf_find(parent, vs[i])
        if a == b:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]


@numba.njit(cache=True, nogil=True)
def uf_component_sizes(parent, size):
    """Sizes of all components (one entry per root, in root order)."""
    n = parent.shape[0]
    count = 0
    for v in range(n):
        if parent[v] == v:
            count += 1
    out = np.empty(count, dtype=np.int64)
    k = 0
    for v in range(n):
        if parent[v] == v:
            out[k] = size[v]
            k += 1
    return out


@numba.njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@numba.njit(cache=True)
def _ctz(x):
    c = 0
    while (x & 1) == 0:
        x >>= 1
        c += 1
    return c


@numba.njit(cache=True)
def min_boundary_ratio(nbr_mask, deg, nv):
    """Gray-code walk over all vertex subsets.

    Returns ``(boundary, size, mask)`` minimising ``boundary / size`` over
    nonempty ``S`` with ``|S| <= nv / 2``; ties go to the smallest mask.
    """
    half = nv // 2
    best_b = -1
    best_s = 1
    best_mask = 0
    s_mask = 0
    size = 0
    bnd = 0
    total = 1 << nv
    for i in range(1, total):
        v = _ctz(i)
        bit = 1 << v
        inside = _popcount(nbr_mask[v] & s_mask)
        if s_mask & bit:
            s_mask ^= bit
            size -= 1
            bnd -= deg[v] - 2 * inside
        else:
            s_mask |= bit
            size += 1
            bnd += deg[v] - 2 * inside
        if size >= 1 and size <= half:
            if best_b < 0:
                best_b, best_s, best_mask = bnd, size, s_mask
            else:
                lhs = bnd * best_s
                rhs = best_b * size
                if lhs < rhs or (lhs == rhs and s_mask < best_mask):
                    best_b, best_s, best_mask = bnd, size, s_mask
    return best_b, best_s, best_mask
