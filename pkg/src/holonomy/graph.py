"""Properly 4-edge-colored graphs on dense integer ids.

Storage is four flat int32 arrays, one per color, ``nbr[c][v]`` giving
the color-c neighbor of ``v`` or -1. Proper coloring (at most one edge
per color per vertex, no loops) is enforced at insertion time, so the
per-color maps are partial involutions by construction.

Graphs are built append-only through :class:`GraphBuilder` and frozen
into :class:`ColoredGraph`; everything downstream reads the frozen
arrays only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .colors import COLOR_NAMES, NUM_COLORS, color_from_name
from .errors import InvariantError, ProperColoringError

_ABSENT = -1

# hash constants mirrored from _kernels; the pure-python fingerprint
# below must replicate the kernel arithmetic bit for bit
_FNV_OFFSET1 = 0xCBF29CE484222325
_FNV_OFFSET2 = 0x84222325CBF29CE4
_FNV_PRIME = 0x100000001B3
_MIX2 = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


class GraphBuilder:
    """Growable properly colored graph; freeze() yields the immutable form."""

    def __init__(self, capacity: int = 16):
        capacity = max(capacity, 4)
        self._nbr = np.full((NUM_COLORS, capacity), _ABSENT, dtype=np.int32)
        self._stage = np.zeros(capacity, dtype=np.int16)
        self._role = np.zeros(capacity, dtype=np.int32)
        self._role_names: list[str] = []
        self._role_ids: dict[str, int] = {}
        self._n = 0

    @property
    def n(self) -> int:
        return self._n

    def _role_id(self, role: str) -> int:
        rid = self._role_ids.get(role)
        if rid is None:
            rid = len(self._role_names)
            self._role_names.append(role)
            self._role_ids[role] = rid
        return rid

    def _grow(self, need: int) -> None:
        cap = self._nbr.shape[1]
        if need <= cap:
            return
        new_cap = max(need, cap * 2)
        nbr = np.full((NUM_COLORS, new_cap), _ABSENT, dtype=np.int32)
        nbr[:, :cap] = self._nbr
        self._nbr = nbr
        self._stage = np.resize(self._stage, new_cap)
        self._stage[self._n:] = 0
        self._role = np.resize(self._role, new_cap)
        self._role[self._n:] = 0

    def new_vertices(self, count: int, stage: int, role: str) -> range:
        """Append ``count`` vertices tagged with provenance; returns their id range."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        start = self._n
        self._grow(start + count)
        self._stage[start:start + count] = stage
        self._role[start:start + count] = self._role_id(role)
        self._n += count
        return range(start, start + count)

    def set_role(self, v: int, role: str) -> None:
        self._role[v] = self._role_id(role)

    def add_edge(self, u: int, v: int, c: int) -> None:
        if u == v:
            raise ProperColoringError(f"loop rejected at vertex {u}")
        n = self._n
        if not (0 <= u < n and 0 <= v < n):
            raise InvariantError(f"edge ({u},{v}) references unknown vertex (n={n})")
        row = self._nbr[c]
        if row[u] != _ABSENT:
            raise ProperColoringError(f"color {COLOR_NAMES[c]} occupied at {u}")
        if row[v] != _ABSENT:
            raise ProperColoringError(f"color {COLOR_NAMES[c]} occupied at {v}")
        row[u] = v
        row[v] = u

    def add_edges(self, us: np.ndarray, vs: np.ndarray, c: int) -> None:
        """Bulk insertion of same-colored edges; same checks as add_edge."""
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        if us.shape != vs.shape:
            raise ValueError("endpoint arrays differ in shape")
        if us.size == 0:
            return
        if np.any(us == vs):
            raise ProperColoringError("loop rejected in bulk insertion")
        n = self._n
        both = np.concatenate([us, vs])
        if both.min() < 0 or both.max() >= n:
            raise InvariantError("bulk edge references unknown vertex")
        row = self._nbr[c]
        if np.any(row[both] != _ABSENT):
            bad = both[row[both] != _ABSENT][0]
            raise ProperColoringError(f"color {COLOR_NAMES[c]} occupied at {bad}")
        # endpoints must also be distinct within the batch
        order = np.argsort(both, kind="stable")
        sb = both[order]
        if np.any(sb[1:] == sb[:-1]):
            raise ProperColoringError("duplicate endpoint in bulk insertion")
        row[us] = vs
        row[vs] = us

    def neighbor(self, v: int, c: int) -> int:
        w = self._nbr[c, v]
        return int(w)

    def freeze(self, connected: bool = False) -> "ColoredGraph":
        g = ColoredGraph(
            self._nbr[:, :self._n].copy(),
            self._stage[:self._n].copy(),
            self._role[:self._n].copy(),
            tuple(self._role_names),
        )
        g.validate_proper()
        if connected and not g.is_connected():
            raise InvariantError("graph marked connected but BFS from 0 does not reach all")
        return g


class ColoredGraph:
    """Frozen properly 4-edge-colored graph."""

    def __init__(self, nbr, stage, role, role_names):
        self.nbr = nbr
        self.stage = stage
        self.role = role
        self.role_names = role_names
        for a in (self.nbr, self.stage, self.role):
            a.setflags(write=False)

    @property
    def n(self) -> int:
        return self.nbr.shape[1]

    def neighbor(self, v: int, c: int) -> int:
        """Color-c neighbor of v, or -1."""
        return int(self.nbr[c, v])

    def neighbors(self, v: int) -> list[tuple[int, int]]:
        return [(c, int(self.nbr[c, v])) for c in range(NUM_COLORS) if self.nbr[c, v] >= 0]

    def degrees(self) -> np.ndarray:
        return (self.nbr >= 0).sum(axis=0).astype(np.int32)

    def degree(self, v: int) -> int:
        return int((self.nbr[:, v] >= 0).sum())

    def edge_count(self) -> int:
        return int((self.nbr >= 0).sum()) // 2

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All edges once as (u, v, color) with u < v, sorted ascending."""
        us, vs, cs = [], [], []
        for c in range(NUM_COLORS):
            row = self.nbr[c]
            u = np.nonzero(row >= 0)[0]
            v = row[u]
            keep = u < v
            us.append(u[keep].astype(np.int64))
            vs.append(v[keep].astype(np.int64))
            cs.append(np.full(int(keep.sum()), c, dtype=np.int64))
        u = np.concatenate(us) if us else np.empty(0, dtype=np.int64)
        v = np.concatenate(vs) if vs else np.empty(0, dtype=np.int64)
        c = np.concatenate(cs) if cs else np.empty(0, dtype=np.int64)
        order = np.lexsort((c, v, u))
        return u[order], v[order], c[order]

    def validate_proper(self) -> None:
        """Full scan of the involution/properness invariants."""
        n = self.n
        idx = np.arange(n, dtype=np.int64)
        for c in range(NUM_COLORS):
            row = self.nbr[c]
            present = row >= 0
            w = row[present].astype(np.int64)
            if w.size == 0:
                continue
            if w.max() >= n:
                raise InvariantError(f"color {COLOR_NAMES[c]} points past vertex count")
            if np.any(w == idx[present]):
                raise ProperColoringError(f"loop present in color {COLOR_NAMES[c]}")
            if np.any(row[w] != idx[present]):
                raise ProperColoringError(f"color {COLOR_NAMES[c]} pairing is not an involution")

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        dist = _kernels.bfs_dist(self.nbr, 0, -1)
        return bool((dist >= 0).all())

    def ball(self, x: int, r: int) -> "RootedBall":
        """Spanned subgraph on the distance-<= r vertices around x.

        Members come out in canonical discovery order (BFS, colors tried
        in A < B < C < D order), which is what makes the serialized code
        below a complete isomorphism invariant: properness leaves no
        tie to break.
        """
        if not (0 <= x < self.n):
            raise InvariantError(f"ball root {x} out of range")
        members = [x]
        index_of = {x: 0}
        dist = [0]
        head = 0
        nbr = self.nbr
        while head < len(members):
            u = members[head]
            du = dist[head]
            head += 1
            if du >= r:
                continue
            for c in range(NUM_COLORS):
                w = int(nbr[c, u])
                if w >= 0 and w not in index_of:
                    index_of[w] = len(members)
                    members.append(w)
                    dist.append(du + 1)
        size = len(members)
        local = np.full((NUM_COLORS, size), _ABSENT, dtype=np.int32)
        for i, u in enumerate(members):
            for c in range(NUM_COLORS):
                w = int(nbr[c, u])
                if w >= 0:
                    j = index_of.get(w)
                    if j is not None:
                        local[c, i] = j
        return RootedBall(
            root=x,
            radius=r,
            members=np.asarray(members, dtype=np.int64),
            local_nbr=local,
        )


@dataclass(frozen=True)
class RootedBall:
    """A ball as an induced rooted colored subgraph.

    ``members`` holds global ids in canonical discovery order (root
    first); ``local_nbr`` is the induced adjacency over local indices.
    """

    root: int
    radius: int
    members: np.ndarray
    local_nbr: np.ndarray

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class BallType:
    """Canonical serialization of a RootedBall: the unit of the type space."""

    code: bytes
    radius: int
    root_degree: int


def canonical_code(b: RootedBall) -> BallType:
    """Serialize a ball so equal codes mean rooted colored isomorphism.

    The code is the int32 sequence of the four neighbor slots of every
    member in discovery order (local index, or -1 when the neighbor is
    absent or outside the ball -- the induced subgraph does not know the
    difference), followed by the member count. Discovery order is
    canonical because the coloring is proper: at most one neighbor per
    color, so BFS in fixed color order never needs a tie-break, and any
    root-preserving color-preserving isomorphism must map discovery
    index to discovery index.
    """
    seq = np.empty(NUM_COLORS * b.size + 1, dtype=np.int32)
    seq[:NUM_COLORS * b.size] = b.local_nbr.T.reshape(-1)
    seq[NUM_COLORS * b.size] = b.size
    root_degree = int((b.local_nbr[:, 0] >= 0).sum())
    return BallType(code=seq.tobytes(), radius=b.radius, root_degree=root_degree)


def root_degree_of_code(code: bytes) -> int:
    """Recover the root degree (in the induced ball) from a code alone."""
    first = np.frombuffer(code, dtype=np.int32, count=NUM_COLORS)
    return int((first >= 0).sum())


def fingerprint_code(code: bytes) -> tuple[int, int]:
    """Reference 128-bit fingerprint of a code; replicates the kernel lanes."""
    seq = np.frombuffer(code, dtype=np.int32)
    h1 = _FNV_OFFSET1
    h2 = _FNV_OFFSET2
    for x in seq:
        v = int(x) + 2
        h1 = ((h1 ^ v) * _FNV_PRIME) & _MASK64
        h2 = ((h2 ^ ((v * _MIX2) & _MASK64)) * _FNV_PRIME) & _MASK64
    return h1, h2


def d_bridges(g: ColoredGraph) -> bool:
    """True iff every D-colored edge is a bridge.

    Contract the components of the A,B,C-subgraph; a D-edge is a bridge
    exactly when it joins two distinct components and the D-edges form a
    forest over those components.
    """
    from .colors import D

    labels = _kernels.component_labels(g.nbr, 3)
    row = g.nbr[D]
    u = np.nonzero(row >= 0)[0]
    v = row[u]
    keep = u < v
    cu = labels[u[keep]]
    cv = labels[v[keep]]
    if np.any(cu == cv):
        return False
    parent = np.arange(int(labels.max()) + 1 if labels.size else 0, dtype=np.int64)

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in zip(cu.tolist(), cv.tolist()):
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


# ---------------------------------------------------------------------------
# JSON graph files
# format: {"vertices": N, "edges": [[u,v,"A"],...], "meta": [{"stage":k,"role":"..."},...]}
# edges each once with u < v, sorted (u, v, color) ascending
# ---------------------------------------------------------------------------

_CHUNK_EDGES = 65536
_CHUNK_BYTES = 1 << 20


def write_json(g: ColoredGraph, path: str) -> None:
    u, v, c = g.edge_arrays()
    letters = [COLOR_NAMES[int(x)] for x in range(NUM_COLORS)]
    with open(path, "w", encoding="ascii") as f:
        f.write('{"vertices": %d, "edges": [' % g.n)
        for start in range(0, len(u), _CHUNK_EDGES):
            uu = u[start:start + _CHUNK_EDGES].tolist()
            vv = v[start:start + _CHUNK_EDGES].tolist()
            cc = c[start:start + _CHUNK_EDGES].tolist()
            parts = [f'[{a},{b},"{letters[k]}"]' for a, b, k in zip(uu, vv, cc)]
            if start > 0:
                f.write(",")
            f.write(",".join(parts))
        f.write('], "meta": [')
        stage = g.stage.tolist()
        role = g.role.tolist()
        names = g.role_names
        for start in range(0, g.n, _CHUNK_EDGES):
            parts = [
                '{"stage":%d,"role":"%s"}' % (stage[i], names[role[i]])
                for i in range(start, min(start + _CHUNK_EDGES, g.n))
            ]
            if start > 0:
                f.write(",")
            f.write(",".join(parts))
        f.write("]}")


_EDGE_RE = re.compile(r'\[(\d+),(\d+),"([ABCD])"\]')
_META_RE = re.compile(r'\{"stage":(-?\d+),"role":"([^"]*)"\}')
_HEAD_RE = re.compile(r'^\{"vertices":\s*(\d+),\s*"edges":\s*\[')


def read_json(path: str) -> ColoredGraph:
    """Stream-parse a graph file written by write_json.

    The format is fixed by contract, so a regex scan over buffered
    chunks is enough and avoids materializing multi-hundred-MB object
    trees for big graphs. Properness is re-validated after load.
    """
    from array import array

    eu, ev, ec = array("q"), array("q"), array("b")
    metas: list[tuple[int, str]] = []
    # unmatched buffer tails carry over to the next chunk, so a record
    # split across a read boundary is reassembled before matching
    with open(path, "r", encoding="ascii") as f:
        head = f.read(256)
        m = _HEAD_RE.match(head)
        if not m:
            raise InvariantError(f"{path}: not a graph file")
        n = int(m.group(1))
        f.seek(0)
        in_meta = False
        carry = ""
        while True:
            chunk = f.read(_CHUNK_BYTES)
            if not chunk:
                break
            text = carry + chunk
            if not in_meta:
                split = text.find('"meta"')
                if split < 0:
                    # scan everything; a record cut off at the end of the
                    # buffer stays unmatched and is carried whole (as is a
                    # partial "meta" marker)
                    last = 0
                    for em in _EDGE_RE.finditer(text):
                        eu.append(int(em.group(1)))
                        ev.append(int(em.group(2)))
                        ec.append(color_from_name(em.group(3)))
                        last = em.end()
                    carry = text[last:]
                    continue
                # the edge section ends before the marker, so every record
                # in [0, split) is complete
                for em in _EDGE_RE.finditer(text, 0, split):
                    eu.append(int(em.group(1)))
                    ev.append(int(em.group(2)))
                    ec.append(color_from_name(em.group(3)))
                in_meta = True
                text = text[split:]
            last = 0
            for mm in _META_RE.finditer(text):
                metas.append((int(mm.group(1)), mm.group(2)))
                last = mm.end()
            carry = text[last:]
    if len(metas) != n:
        raise InvariantError(f"{path}: {len(metas)} meta records for {n} vertices")
    b = GraphBuilder(capacity=max(n, 4))
    # group contiguous runs of identical meta to avoid per-vertex calls
    start = 0
    while start < n:
        end = start
        while end < n and metas[end] == metas[start]:
            end += 1
        b.new_vertices(end - start, metas[start][0], metas[start][1])
        start = end
    us = np.frombuffer(eu, dtype=np.int64)
    vs = np.frombuffer(ev, dtype=np.int64)
    cs = np.frombuffer(ec, dtype=np.int8)
    for c in range(NUM_COLORS):
        sel = cs == c
        if sel.any():
            b.add_edges(us[sel], vs[sel], c)
    return b.freeze()


def graphs_equal(a: ColoredGraph, b: ColoredGraph) -> bool:
    return (
        a.n == b.n
        and np.array_equal(a.nbr, b.nbr)
        and np.array_equal(a.stage, b.stage)
        and [a.role_names[r] for r in a.role.tolist()]
        == [b.role_names[r] for r in b.role.tolist()]
    )
