"""Finite-radius vertex types and their transport structure.

The r-type of a vertex is the isomorphism class of its r-ball as a
rooted edge-colored graph (spanned subgraph semantics).  Types are
keyed by the 128-bit fingerprint of the canonical ball code; a
reference implementation of the code is spot-checked against the
hashing kernel on every table build, and the refinement maps between
consecutive radii double as a collision audit: a fingerprint collision
would show up as a radius-(r+1) class straddling two radius-r classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConfigError, InvariantError
from .graph import ColoredGraph, canonical_code, fingerprint_code, root_degree_of_code
from .words import word_to_string

__all__ = [
    "TypeTable",
    "compute_types",
    "StableRegion",
    "genericity_report",
    "holonomy_radius",
    "pushforward_defect",
    "determination_audit",
    "transport_check",
    "write_type_csv",
    "write_holonomy_csv",
]


@dataclass
class TypeTable:
    """Dense per-radius type classes for a fixed set of root vertices.

    Class ids at each radius are 0..n_classes-1 in fingerprint sort
    order, so they are deterministic for a given graph.  ``parents[r]``
    maps each radius-r class to the radius-(r-1) class its members
    share; its existence is verified at construction.
    """

    n_graph: int
    r_max: int
    verts: np.ndarray  # ascending root ids
    ids: np.ndarray  # (r_max+1, len(verts)) int32
    counts: list  # per radius: int64[n_classes]
    reps: list  # per radius: lowest root id per class
    fingerprints: list  # per radius: uint64[n_classes, 2]
    root_degrees: list  # per radius: int32[n_classes]
    parents: list  # per radius: int32[n_classes] or None at r=0

    @property
    def full(self) -> bool:
        return self.verts.size == self.n_graph

    def n_classes(self, r: int) -> int:
        return int(self.counts[r].size)

    def class_of(self, r: int) -> np.ndarray:
        return self.ids[r]

    def classes_of_vertices(self, r: int, verts) -> np.ndarray:
        verts = np.asarray(verts, dtype=np.int64)
        if self.full:
            return self.ids[r][verts]
        pos = np.searchsorted(self.verts, verts)
        if np.any(pos >= self.verts.size) or np.any(self.verts[pos] != verts):
            raise ConfigError("vertex outside the typed region")
        return self.ids[r][pos]

    def fingerprint_hex(self, r: int, class_id: int) -> str:
        lo, hi = self.fingerprints[r][class_id]
        return f"{int(hi):016x}{int(lo):016x}"


def _dense_classes(lo: np.ndarray, hi: np.ndarray, verts: np.ndarray):
    """Dense ids in (lo, hi) sort order plus counts and lowest-id reps."""
    order = np.lexsort((hi, lo))
    slo = lo[order]
    shi = hi[order]
    new = np.empty(lo.size, dtype=bool)
    new[0] = True
    new[1:] = (slo[1:] != slo[:-1]) | (shi[1:] != shi[:-1])
    cid_sorted = np.cumsum(new) - 1
    ids = np.empty(lo.size, dtype=np.int32)
    ids[order] = cid_sorted.astype(np.int32)
    nclasses = int(cid_sorted[-1]) + 1
    counts = np.bincount(ids, minlength=nclasses).astype(np.int64)
    fps = np.empty((nclasses, 2), dtype=np.uint64)
    fps[:, 0] = slo[new]
    fps[:, 1] = shi[new]
    # lexsort is stable and verts ascend, so the first member of each
    # sorted group is the lowest root id in its class
    reps = verts[order[new]]
    return ids, counts, reps, fps


def compute_types(
    g: ColoredGraph,
    r_max: int,
    region=None,
    audit_samples: int = 64,
) -> TypeTable:
    """Type every root at radii 0..r_max and verify internal consistency."""
    if r_max < 0:
        raise ConfigError(f"r_max must be >= 0, got {r_max}")
    if region is None:
        verts = np.arange(g.n, dtype=np.int64)
    else:
        verts = np.unique(np.asarray(region, dtype=np.int64))
        if verts.size == 0:
            raise ConfigError("empty type region")
        if verts[0] < 0 or verts[-1] >= g.n:
            raise ConfigError("type region references unknown vertices")

    index_of = np.full(g.n, -1, dtype=np.int32)
    queue = np.empty(max(_kernels.ball_capacity(max(r_max, 1)), 64), dtype=np.int32)
    degrees = g.degrees()

    ids = np.empty((r_max + 1, verts.size), dtype=np.int32)
    counts, reps, fps, rdegs = [], [], [], []
    for r in range(r_max + 1):
        lo, hi = _kernels.ball_fingerprints(g.nbr, verts, r, index_of, queue)
        ids_r, cnt, rep, fp = _dense_classes(lo, hi, verts)
        ids[r] = ids_r
        counts.append(cnt)
        reps.append(rep)
        fps.append(fp)
        if r == 0:
            rdegs.append(np.zeros(cnt.size, dtype=np.int32))
        else:
            rdegs.append(degrees[rep].astype(np.int32))

    parents: list = [None]
    for r in range(1, r_max + 1):
        nc_prev = counts[r - 1].size
        pairs = ids[r].astype(np.int64) * nc_prev + ids[r - 1]
        upairs = np.unique(pairs)
        if upairs.size != counts[r].size:
            raise InvariantError(
                f"radius {r} classes do not refine radius {r - 1}: "
                "fingerprint collision suspected"
            )
        parent = np.empty(counts[r].size, dtype=np.int32)
        parent[upairs // nc_prev] = (upairs % nc_prev).astype(np.int32)
        parents.append(parent)

    table = TypeTable(
        n_graph=g.n,
        r_max=r_max,
        verts=verts,
        ids=ids,
        counts=counts,
        reps=reps,
        fingerprints=fps,
        root_degrees=rdegs,
        parents=parents,
    )
    if audit_samples > 0:
        _audit_against_reference(g, table, audit_samples)
    return table


def _audit_against_reference(g: ColoredGraph, table: TypeTable, samples: int) -> None:
    """Recompute a spread of full codes in plain python and compare."""
    nv = table.verts.size
    pick = np.unique(np.linspace(0, nv - 1, min(samples, nv)).astype(np.int64))
    for r in range(table.r_max + 1):
        for pos in pick:
            v = int(table.verts[pos])
            bt = canonical_code(g.ball(v, r))
            lo, hi = fingerprint_code(bt.code)
            cid = int(table.ids[r][pos])
            want_lo, want_hi = table.fingerprints[r][cid]
            if lo != int(want_lo) or hi != int(want_hi):
                raise InvariantError(
                    f"fingerprint kernel disagrees with reference at vertex {v}, "
                    f"radius {r}"
                )
            stored_deg = int(table.root_degrees[r][cid])
            if root_degree_of_code(bt.code) != stored_deg and r >= 1:
                raise InvariantError(
                    f"root degree mismatch at vertex {v}, radius {r}"
                )


class StableRegion:
    """Vertices whose neighborhoods cannot change under further stages.

    All future growth hangs off one attachment vertex, so a vertex
    whose r-ball avoids it keeps its r-type in every extension.
    """

    def __init__(self, g: ColoredGraph, attach_vertex: int):
        if not (0 <= attach_vertex < g.n):
            raise ConfigError(f"attach vertex {attach_vertex} outside graph")
        self.attach_vertex = attach_vertex
        self.dist = _kernels.bfs_dist(g.nbr, attach_vertex, -1)

    @classmethod
    def from_build(cls, g: ColoredGraph, log) -> "StableRegion":
        return cls(g, log.stages[-1].r)

    def mask(self, r: int) -> np.ndarray:
        return self.dist > r

    def vertices(self, r: int) -> np.ndarray:
        return np.nonzero(self.mask(r))[0]

    def count(self, r: int) -> int:
        return int(self.mask(r).sum())


def genericity_report(g: ColoredGraph, table: TypeTable, region) -> dict:
    """How quickly a region's vertices get separated into distinct types."""
    region = np.unique(np.asarray(region, dtype=np.int64))
    if region.size == 0:
        raise ConfigError("empty region")
    distinct = {}
    separated_at = None
    for r in range(table.r_max + 1):
        k = int(np.unique(table.classes_of_vertices(r, region)).size)
        distinct[r] = k
        if separated_at is None and k == region.size:
            separated_at = r
    return {
        "size": int(region.size),
        "distinct_by_radius": distinct,
        "separated_at": separated_at,
    }


def holonomy_radius(
    g: ColoredGraph,
    table: TypeTable,
    r: int,
    class_id: int,
    stable_mask: np.ndarray | None = None,
):
    """Covering radius of one type class: how far any (stable) vertex
    can sit from the nearest vertex of that class.  Returns inf when
    some relevant vertex cannot reach the class at all."""
    if not (0 <= class_id < table.n_classes(r)):
        raise ConfigError(f"no class {class_id} at radius {r}")
    members = table.verts[table.ids[r] == class_id]
    dist, _ = _kernels.multi_source_bfs(g.nbr, members.astype(np.int64))
    d = dist if stable_mask is None else dist[stable_mask]
    if d.size == 0:
        return 0
    if int(d.min()) < 0:
        return math.inf
    return int(d.max())


def _image_under(g: ColoredGraph, generator: int, verts: np.ndarray) -> np.ndarray:
    img = g.nbr[generator, verts].astype(np.int64)
    stay = img < 0
    img[stay] = verts[stay]
    return img


def _omega_vertices(omega) -> np.ndarray:
    if isinstance(omega, tuple) and len(omega) == 2:
        return np.arange(omega[0], omega[1], dtype=np.int64)
    return np.unique(np.asarray(omega, dtype=np.int64))


def pushforward_defect(
    g: ColoredGraph,
    table: TypeTable,
    generator: int,
    omega,
    r: int,
) -> dict:
    """Compare a region's radius-r type counts against the image counts
    under one generator, routed two ways.

    The direct route types every image vertex.  The decomposed route
    groups the region by radius-(r+1) classes, uses the fact that the
    (r+1)-ball of x determines the r-ball of its image, and folds class
    counts through that map; the two must agree exactly.  The L1 gap
    between the region's own counts and the image counts is bounded by
    twice the region's edge boundary.
    """
    if r + 1 > table.r_max:
        raise ConfigError(f"defect at radius {r} needs types at {r + 1}")
    if not (0 <= generator < 4):
        raise ConfigError(f"bad generator {generator}")
    verts_om = _omega_vertices(omega)
    img = _image_under(g, generator, verts_om)

    if table.full:
        ids_r = table.ids[r]
        ids_r1 = table.ids[r + 1]
        alpha_om = ids_r[verts_om]
        alpha_img = ids_r[img]
        beta_om = ids_r1[verts_om]
    else:
        alpha_om = table.classes_of_vertices(r, verts_om)
        alpha_img = table.classes_of_vertices(r, img)
        beta_om = table.classes_of_vertices(r + 1, verts_om)

    nc = table.n_classes(r)
    tau = np.bincount(alpha_om, minlength=nc).astype(np.int64)
    direct = np.bincount(alpha_img, minlength=nc).astype(np.int64)

    order = np.lexsort((alpha_img, beta_om))
    b_s = beta_om[order]
    a_s = alpha_img[order]
    same_b = b_s[1:] == b_s[:-1]
    determined = not bool((same_b & (a_s[1:] != a_s[:-1])).any())

    new_b = np.empty(b_s.size, dtype=bool)
    new_b[0] = True
    new_b[1:] = ~same_b
    via = np.zeros(nc, dtype=np.int64)
    if determined:
        beta_vals = b_s[new_b]
        alpha_of_beta = a_s[new_b]
        beta_counts = np.bincount(beta_om, minlength=table.n_classes(r + 1))
        np.add.at(via, alpha_of_beta, beta_counts[beta_vals])

    boundary = 0
    present = np.zeros(g.n, dtype=bool)
    present[verts_om] = True
    for c in range(4):
        nb = g.nbr[c, verts_om]
        boundary += int(((nb >= 0) & ~present[np.clip(nb, 0, g.n - 1)]).sum())

    defect = int(np.abs(tau - direct).sum())
    return {
        "generator": generator,
        "radius": r,
        "tau": tau,
        "direct": direct,
        "via_types": via,
        "determined": determined,
        "exact": determined and bool((via == direct).all()),
        "defect": defect,
        "boundary_edges": boundary,
        "bound": 2 * boundary,
        "ok": determined and defect <= 2 * boundary,
    }


def determination_audit(g: ColoredGraph, table: TypeTable, r: int) -> bool:
    """Graph-wide check that the (r+1)-type of x pins down the r-type of
    every generator image of x; raises on any counterexample."""
    if r + 1 > table.r_max:
        raise ConfigError(f"audit at radius {r} needs types at {r + 1}")
    if not table.full:
        raise ConfigError("determination audit needs a full-graph table")
    verts = table.verts
    ids_r1 = table.ids[r + 1].astype(np.int64)
    ids_r = table.ids[r].astype(np.int64)
    nc = table.n_classes(r)
    for generator in range(4):
        img = _image_under(g, generator, verts)
        pairs = ids_r1 * nc + ids_r[img]
        if np.unique(pairs).size != table.n_classes(r + 1):
            raise InvariantError(
                f"generator {generator}: radius-{r + 1} type fails to determine "
                f"the image's radius-{r} type"
            )
    return True


def transport_check(
    g: ColoredGraph,
    table: TypeTable,
    x: int,
    target_class: int,
    r: int,
    word_budget: int,
) -> dict:
    """Search for a word of length <= word_budget taking x into a vertex
    of the target radius-r class; BFS over the graph, so the word found
    is shortest possible."""
    if not (0 <= x < g.n):
        raise ConfigError(f"vertex {x} outside graph")
    if not (0 <= target_class < table.n_classes(r)):
        raise ConfigError(f"no class {target_class} at radius {r}")
    if word_budget < 0:
        raise ConfigError("word budget must be >= 0")
    is_target = np.zeros(g.n, dtype=bool)
    is_target[table.verts[table.ids[r] == target_class]] = True

    if is_target[x]:
        return {"found": True, "word": "", "target": int(x), "steps": 0}

    dist = {x: 0}
    parent: dict[int, tuple[int, int]] = {}
    frontier = [x]
    depth = 0
    found = -1
    while frontier and depth < word_budget and found < 0:
        depth += 1
        nxt = []
        for u in frontier:
            for c in range(4):
                w = int(g.nbr[c, u])
                if w >= 0 and w not in dist:
                    dist[w] = depth
                    parent[w] = (u, c)
                    if is_target[w]:
                        found = w
                        break
                    nxt.append(w)
            if found >= 0:
                break
        frontier = nxt
    if found < 0:
        return {"found": False, "word": None, "target": None, "steps": None}

    letters = []
    v = found
    while v != x:
        u, c = parent[v]
        letters.append(c)
        v = u
    word = tuple(letters)  # first BFS step ends up rightmost, so it is applied first
    return {
        "found": True,
        "word": word_to_string(word),
        "target": int(found),
        "steps": len(letters),
    }


def write_type_csv(table: TypeTable, path: str) -> None:
    with open(path, "w") as f:
        f.write("radius,class,count,root_degree,fingerprint,parent\n")
        for r in range(table.r_max + 1):
            par = table.parents[r]
            for cid in range(table.n_classes(r)):
                p = "" if par is None else str(int(par[cid]))
                f.write(
                    f"{r},{cid},{int(table.counts[r][cid])},"
                    f"{int(table.root_degrees[r][cid])},"
                    f"{table.fingerprint_hex(r, cid)},{p}\n"
                )


def write_holonomy_csv(
    g: ColoredGraph,
    table: TypeTable,
    r: int,
    path: str,
    stable_mask: np.ndarray | None = None,
) -> None:
    with open(path, "w") as f:
        f.write("radius,class,count,m_alpha\n")
        for cid in range(table.n_classes(r)):
            m = holonomy_radius(g, table, r, cid, stable_mask)
            m_str = "inf" if m == math.inf else str(m)
            f.write(f"{r},{cid},{int(table.counts[r][cid])},{m_str}\n")
