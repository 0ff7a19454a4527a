"""The path-rule action of words on properly colored graphs.

A generator acts on a vertex by following the edge of its color when
present and staying put otherwise; a word acts by applying its letters
right to left. On a properly colored graph each generator is then an
involution of the vertex set, so this is an action of the free product
of four Z/2's.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .colors import A, B, C, COLOR_NAMES, NUM_COLORS
from .errors import ConfigError, InvariantError
from .graph import ColoredGraph, GraphBuilder, canonical_code
from .words import Word, enumerate_words, word_to_string

ABC = (A, B, C)


def apply_word(g: ColoredGraph, w: Word, x: int) -> int:
    """Endpoint of the unique path reading w right to left from x."""
    cur = x
    nbr = g.nbr
    for c in reversed(w):
        nxt = nbr[c, cur]
        if nxt >= 0:
            cur = int(nxt)
    return cur


def apply_generator_all(g: ColoredGraph, c: int) -> np.ndarray:
    """The generator's permutation as an array over all vertices (stays included)."""
    row = g.nbr[c]
    out = np.arange(g.n, dtype=np.int64)
    present = row >= 0
    out[present] = row[present]
    return out


def schreier_graph(generator_images: list[np.ndarray]) -> ColoredGraph:
    """Colored graph of an action given as 3 or 4 involutive permutations.

    Fixed points of a permutation get no edge of that color, matching
    the stay rule. Colors are assigned in order A, B, C(, D).
    """
    if len(generator_images) not in (3, NUM_COLORS):
        raise ConfigError("need three or four generator permutations")
    n = len(generator_images[0])
    b = GraphBuilder(capacity=max(n, 4))
    b.new_vertices(n, 0, "schreier")
    for c, perm in enumerate(generator_images):
        perm = np.asarray(perm, dtype=np.int64)
        if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
            raise ConfigError(f"image {COLOR_NAMES[c]} is not a permutation of 0..{n - 1}")
        if not np.array_equal(perm[perm], np.arange(n)):
            raise ConfigError(f"image {COLOR_NAMES[c]} is not an involution")
        us = np.nonzero(perm > np.arange(n))[0]
        if us.size:
            b.add_edges(us, perm[us], c)
    return b.freeze()


def permutations_from_graph(g: ColoredGraph, ncolors: int = NUM_COLORS) -> list[np.ndarray]:
    """Read the generator permutations back off a colored graph (round-trip of schreier_graph)."""
    return [apply_generator_all(g, c) for c in range(ncolors)]


def orbit(g: ColoredGraph, x: int, generators=ABC) -> np.ndarray:
    """BFS closure of x under the listed colors; ascending vertex ids."""
    gens = sorted(set(generators))
    if gens == [0, 1, 2]:
        labels = _kernels.component_labels(g.nbr, 3)
        return np.nonzero(labels == labels[x])[0]
    if gens == [0, 1, 2, 3]:
        dist = _kernels.bfs_dist(g.nbr, x, -1)
        return np.nonzero(dist >= 0)[0]
    seen = {x}
    stack = [x]
    while stack:
        u = stack.pop()
        for c in gens:
            w = int(g.nbr[c, u])
            if w >= 0 and w not in seen:
                seen.add(w)
                stack.append(w)
    return np.asarray(sorted(seen), dtype=np.int64)


def is_free(g: ColoredGraph, x: int, k: int, generators=ABC) -> bool:
    """True iff no nonempty reduced word of length <= k over the generators fixes x.

    The search walks the tree of reduced words depth-first, tracking the
    current vertex under the stay rule, and fails as soon as any prefix
    returns to x. This is exact: a missing edge does not prune the
    branch, it just keeps the walk in place, and such stationary
    prefixes can still be fixators (a vertex with no C-edge is fixed by
    C outright).
    """
    if k < 1:
        raise ConfigError("freeness radius must be >= 1")
    if tuple(generators) == ABC:
        out = _kernels.free_scan(g.nbr, np.asarray([x], dtype=np.int64), k)
        return bool(out[0])
    return _is_free_python(g, x, k, tuple(generators))


def _is_free_python(g: ColoredGraph, x: int, k: int, gens: tuple[int, ...]) -> bool:
    def rec(cur: int, last: int, depth: int) -> bool:
        for c in gens:
            if c == last:
                continue
            w = int(g.nbr[c, cur])
            nxt = w if w >= 0 else cur
            if nxt == x:
                return False
            if depth + 1 < k and not rec(nxt, c, depth + 1):
                return False
        return True

    return rec(x, -1, 0)


def free_vertices(g: ColoredGraph, verts: np.ndarray, k: int) -> np.ndarray:
    """Vectorized is_free over {A,B,C} for many vertices; returns uint8 mask."""
    verts = np.asarray(verts, dtype=np.int64)
    return _kernels.free_scan(g.nbr, verts, k)


def is_free_oracle(g: ColoredGraph, x: int, k: int, generators=ABC) -> bool:
    """Brute force over the explicit word list; cross-check for is_free."""
    for w in enumerate_words(tuple(generators)):
        if len(w) > k:
            return True
        if apply_word(g, w, x) == x:
            return False
    return True


def dihedral_demo(n: int) -> tuple[ColoredGraph, dict]:
    """Two-generator action on {1..n}: A swaps 2j-1 <-> 2j, B swaps 2j <-> 2j+1 and fixes 1.

    Vertex id i stands for the integer i+1. The last vertex is a
    truncation frontier (its partner n+1 is missing) and is excluded
    from the type report. The report shows why this action fails dense
    holonomy: the type of vertex 1 occurs only near the two ends, so its
    recurrence radius grows linearly with n.
    """
    if n < 3:
        raise ConfigError("dihedral demo needs n >= 3")
    b = GraphBuilder(capacity=n)
    b.new_vertices(n, 0, "dihedral")
    b.set_role(n - 1, "frontier")
    # A: ids (0,1), (2,3), ...; B: ids (1,2), (3,4), ... (vertex 1 fixed)
    ua = np.arange(0, n - 1, 2, dtype=np.int64)
    b.add_edges(ua, ua + 1, A)
    ub = np.arange(1, n - 1, 2, dtype=np.int64)
    b.add_edges(ub, ub + 1, B)
    g = b.freeze(connected=True)

    interior = np.arange(n - 1, dtype=np.int64)  # frontier excluded
    report: dict = {"n": n, "frontier": n - 1, "radii": {}}
    for r in (1, 2, 3):
        codes = {}
        for v in interior.tolist():
            codes.setdefault(canonical_code(g.ball(v, r)).code, []).append(v)
        classes = sorted(codes.values(), key=len)
        type_of_one = canonical_code(g.ball(0, r)).code
        sources = np.asarray(codes[type_of_one], dtype=np.int64)
        dist, _ = _kernels.multi_source_bfs(g.nbr, sources)
        m_alpha = int(dist[interior].max())
        report["radii"][r] = {
            "classes": len(classes),
            "largest_class": len(classes[-1]),
            "m_alpha_vertex1": m_alpha,
        }
    # far vertices share all small types: the generic-but-not-repetitive signature
    mid = n // 2
    same = all(
        canonical_code(g.ball(mid, r)).code == canonical_code(g.ball(mid + 4, r)).code
        for r in (1, 2, 3)
        if mid + 4 < n - 1
    )
    report["far_vertices_share_small_types"] = bool(same)
    return g, report


def word_report_csv(g: ColoredGraph, verts, k: int, r: int, path: str) -> None:
    """Per-vertex CSV: vertex, free@k, hash of the r-type code."""
    from .graph import fingerprint_code

    verts = np.asarray(verts, dtype=np.int64)
    free = free_vertices(g, verts, k)
    with open(path, "w", encoding="ascii") as f:
        f.write("vertex,free,type_hash\n")
        for v, fr in zip(verts.tolist(), free.tolist()):
            lo, hi = fingerprint_code(canonical_code(g.ball(v, r)).code)
            f.write(f"{v},{fr},{hi:016x}{lo:016x}\n")
