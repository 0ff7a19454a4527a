"""Numba kernels for the hot paths.

Everything here works on the flat neighbor table of a colored graph:
``nbr`` is an int32 array of shape (4, N) where ``nbr[c, v]`` is the
neighbor of ``v`` along the color-``c`` edge, or -1 if ``v`` has no
edge of that color. Proper coloring means these maps are involutions
where defined.

All kernels are deterministic: queues are FIFO, vertices are scanned in
ascending id order, and no threading is used inside a single call.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# FNV-1a 64-bit constants, two lanes with different offsets. The second
# lane also pre-mixes each item with a fixed odd multiplier so the lanes
# do not collide for permuted input.
_FNV_OFFSET1 = np.uint64(0xCBF29CE484222325)
_FNV_OFFSET2 = np.uint64(0x84222325CBF29CE4)
_FNV_PRIME = np.uint64(0x100000001B3)
_MIX2 = np.uint64(0x9E3779B97F4A7C15)


def ball_capacity(radius: int) -> int:
    """Upper bound on ball size in a graph of max degree 4 (one edge per color)."""
    return 1 + 2 * (3 ** radius - 1) + 4


@njit(cache=True)
def _hash_item(h1, h2, item):
    v = np.uint64(item + 2)
    h1 = (h1 ^ v) * _FNV_PRIME
    h2 = (h2 ^ (v * _MIX2)) * _FNV_PRIME
    return h1, h2


@njit(cache=True)
def ball_fingerprints(nbr, verts, radius, index_of, queue):
    """128-bit fingerprints of the canonical codes of r-balls.

    For each root in ``verts`` runs the canonical color-ordered BFS of
    the ball of ``radius`` (spanned subgraph on vertices at distance
    <= radius) and hashes the code sequence: for every member in
    discovery order its 4 neighbor slots as local discovery indices
    (-1 when the neighbor is absent or outside the ball), then the
    member count. Returns (lo, hi) uint64 arrays.

    ``index_of`` must be an int32 workspace of length N filled with -1,
    ``queue`` an int32 workspace of length >= ball_capacity(radius).
    Both are restored/reusable on return.
    """
    nv = verts.shape[0]
    lo = np.empty(nv, dtype=np.uint64)
    hi = np.empty(nv, dtype=np.uint64)
    vdist = np.empty(queue.shape[0], dtype=np.int32)
    for i in range(nv):
        root = verts[i]
        index_of[root] = 0
        queue[0] = root
        vdist[0] = 0
        size = 1
        head = 0
        h1 = _FNV_OFFSET1
        h2 = _FNV_OFFSET2
        while head < size:
            u = queue[head]
            du = vdist[head]
            head += 1
            expand = du < radius
            for c in range(4):
                w = nbr[c, u]
                if w < 0:
                    h1, h2 = _hash_item(h1, h2, -1)
                    continue
                wi = index_of[w]
                if wi < 0:
                    if expand:
                        wi = size
                        index_of[w] = wi
                        queue[size] = w
                        vdist[size] = du + 1
                        size += 1
                    # at the boundary an undiscovered neighbor is
                    # outside the ball: all members at distance
                    # <= radius are discovered before any vertex at
                    # distance == radius is processed
                h1, h2 = _hash_item(h1, h2, wi if wi >= 0 else -1)
        h1, h2 = _hash_item(h1, h2, size)
        lo[i] = h1
        hi[i] = h2
        for j in range(size):
            index_of[queue[j]] = -1
    return lo, hi


@njit(cache=True)
def bfs_dist(nbr, source, cap):
    """Distances from one source; -1 beyond ``cap`` (cap < 0 means unbounded)."""
    n = nbr.shape[1]
    dist = np.full(n, -1, dtype=np.int32)
    queue = np.empty(n, dtype=np.int64)
    dist[source] = 0
    queue[0] = source
    head = 0
    size = 1
    while head < size:
        u = queue[head]
        head += 1
        du = dist[u]
        if cap >= 0 and du >= cap:
            continue
        for c in range(4):
            w = nbr[c, u]
            if w >= 0 and dist[w] < 0:
                dist[w] = du + 1
                queue[size] = w
                size += 1
    return dist


@njit(cache=True)
def multi_source_bfs(nbr, sources):
    """Joint BFS from several sources.

    Returns (dist, label): for every vertex the distance to the nearest
    source and that source's vertex id. Ties go to the source that is
    earliest in ``sources`` (FIFO order), so results are deterministic.
    Unreached vertices keep dist -1, label -1.
    """
    n = nbr.shape[1]
    dist = np.full(n, -1, dtype=np.int32)
    label = np.full(n, -1, dtype=np.int32)
    queue = np.empty(n, dtype=np.int64)
    size = 0
    for i in range(sources.shape[0]):
        s = sources[i]
        if dist[s] < 0:
            dist[s] = 0
            label[s] = s
            queue[size] = s
            size += 1
    head = 0
    while head < size:
        u = queue[head]
        head += 1
        for c in range(4):
            w = nbr[c, u]
            if w >= 0 and dist[w] < 0:
                dist[w] = dist[u] + 1
                label[w] = label[u]
                queue[size] = w
                size += 1
    return dist, label


@njit(cache=True)
def component_labels(nbr, ncolors):
    """Connected components using only edge colors < ncolors.

    Labels are component ordinals in order of smallest member id.
    """
    n = nbr.shape[1]
    labels = np.full(n, -1, dtype=np.int32)
    queue = np.empty(n, dtype=np.int64)
    comp = 0
    for v in range(n):
        if labels[v] >= 0:
            continue
        labels[v] = comp
        queue[0] = v
        head = 0
        size = 1
        while head < size:
            u = queue[head]
            head += 1
            for c in range(ncolors):
                w = nbr[c, u]
                if w >= 0 and labels[w] < 0:
                    labels[w] = comp
                    queue[size] = w
                    size += 1
        comp += 1
    return labels


@njit(cache=True)
def greedy_net(nbr, spacing, forbidden):
    """Greedy maximal net with pairwise distance >= spacing.

    Scans vertex ids in ascending order; a vertex joins the net unless
    it is forbidden or a previously chosen vertex is within distance
    spacing - 1. Forbidden vertices are skipped as candidates but do
    not block anything. Blocking is done by a depth-limited BFS from
    each chosen vertex. Returns the chosen ids (ascending by
    construction).
    """
    n = nbr.shape[1]
    blocked = np.zeros(n, dtype=np.uint8)
    stamp = np.full(n, -1, dtype=np.int64)
    sdist = np.empty(n, dtype=np.int32)
    queue = np.empty(n, dtype=np.int64)
    chosen = np.empty(n, dtype=np.int64)
    nchosen = 0
    for v in range(n):
        if blocked[v] or forbidden[v]:
            continue
        chosen[nchosen] = v
        nchosen += 1
        # block everything within spacing - 1 of v
        stamp[v] = v
        sdist[v] = 0
        queue[0] = v
        head = 0
        size = 1
        while head < size:
            u = queue[head]
            head += 1
            blocked[u] = 1
            du = sdist[u]
            if du >= spacing - 1:
                continue
            for c in range(4):
                w = nbr[c, u]
                if w >= 0 and stamp[w] != v:
                    stamp[w] = v
                    sdist[w] = du + 1
                    queue[size] = w
                    size += 1
    return chosen[:nchosen].copy()


@njit(cache=True)
def free_scan(nbr, verts, k):
    """For each vertex: 1 if no reduced word of length 1..k fixes it.

    Words are over the first three colors (the subgroup generated by
    A, B, C), reduced means no two consecutive equal letters. A letter
    whose edge is missing at the current vertex acts as the identity
    there (the walk stays), and such stays count: a word that returns
    to the start through stays still fixes it.
    """
    nv = verts.shape[0]
    out = np.zeros(nv, dtype=np.uint8)
    letters = np.empty(k, dtype=np.int32)
    vstack = np.empty(k + 1, dtype=np.int64)
    for i in range(nv):
        v = verts[i]
        vstack[0] = v
        d = 0
        letters[0] = -1
        free = True
        while d >= 0:
            # next untried letter at depth d, skipping immediate repeats
            nl = letters[d] + 1
            if d > 0:
                while nl < 3 and nl == letters[d - 1]:
                    nl += 1
            if nl >= 3:
                d -= 1
                continue
            letters[d] = nl
            u = vstack[d]
            w = nbr[nl, u]
            nxt = w if w >= 0 else u
            if nxt == v:
                free = False
                break
            vstack[d + 1] = nxt
            if d + 1 < k:
                d += 1
                letters[d] = -1
        if free:
            out[i] = 1
    return out


@njit(cache=True)
def girth_scan(nbr, starts, cap, dist, parent, pcolor):
    """Minimum cycle length detectable from the given start vertices.

    BFS from each start, depth-capped at cap // 2 + 1; every non-tree
    edge (u, w) witnesses a closed walk of length dist[u] + dist[w] + 1
    whose cyclic part is a genuine cycle of at most that length, so the
    returned minimum never undercounts the girth. For any cycle through
    a start vertex the bound is met with equality somewhere on it, so
    scanning all vertices yields the exact girth when it is < cap.
    Parallel edges (two colors joining the same pair) count as 2-cycles.

    ``dist``/``parent``/``pcolor`` are int32/int32/int32 workspaces of
    length N; dist must come in filled with -1 and is restored.
    Returns cap when nothing shorter was found.
    """
    n = nbr.shape[1]
    queue = np.empty(n, dtype=np.int64)
    best = cap
    depth_cap = cap // 2 + 1
    for si in range(starts.shape[0]):
        s = starts[si]
        dist[s] = 0
        parent[s] = -1
        pcolor[s] = -1
        queue[0] = s
        head = 0
        size = 1
        while head < size:
            u = queue[head]
            head += 1
            du = dist[u]
            for c in range(4):
                w = nbr[c, u]
                if w < 0:
                    continue
                if dist[w] < 0:
                    if du < depth_cap:
                        dist[w] = du + 1
                        parent[w] = u
                        pcolor[w] = c
                        queue[size] = w
                        size += 1
                    continue
                if w == parent[u] and c == pcolor[u]:
                    continue  # the tree edge itself
                cyc = du + dist[w] + 1
                if cyc < best:
                    best = cyc
        for j in range(size):
            dist[queue[j]] = -1
    return best


@njit(cache=True)
def farthest_vertex(nbr, source):
    """BFS from source; returns (argmax vertex, eccentricity), smallest id on ties."""
    dist = bfs_dist(nbr, source, -1)
    far = source
    ecc = 0
    for v in range(dist.shape[0]):
        if dist[v] > ecc:
            ecc = dist[v]
            far = v
    return far, ecc
