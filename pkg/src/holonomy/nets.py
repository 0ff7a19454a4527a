"""Maximal distance nets and the multi-scale net partition.

A 2d-net is a vertex set with pairwise distances >= 2d. Maximal nets
have covering radius < 2d by maximality; the density bound used
downstream is |A|/|V| <= 1/d, valid when d > 2 and diam >= 2d. The
partition splits the vertex set into nets R_1, ..., R_n at growing
scales plus a remainder R_{n+1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ConfigError, InvariantError
from .graph import ColoredGraph


@dataclass(frozen=True)
class NetSchedule:
    """Strictly increasing spacing parameters s_1 < ... < s_n.

    ``enforce_floor`` additionally requires s_i >= 10^(i+1); the builds
    here never switch it on (the strict schedule that motivates the
    floor already violates it at its own smallest feasible sizes), but
    the flag keeps the stricter reading available.
    """

    s: tuple[int, ...]
    enforce_floor: bool = False

    def __post_init__(self):
        if len(self.s) == 0:
            raise ConfigError("empty net schedule")
        if any(x < 1 for x in self.s):
            raise ConfigError("net spacings must be positive")
        if any(a >= b for a, b in zip(self.s, self.s[1:])):
            raise ConfigError("net schedule must be strictly increasing")
        if self.enforce_floor:
            for i, x in enumerate(self.s, start=1):
                if x < 10 ** (i + 1):
                    raise ConfigError(f"schedule floor violated: s_{i}={x} < 10^{i + 1}")

    def __len__(self) -> int:
        return len(self.s)


def greedy_maximal_net(g: ColoredGraph, spacing: int, forbidden=None) -> np.ndarray:
    """Deterministic maximal net: pairwise distance >= spacing, ascending-id greedy.

    ``forbidden`` vertices are never selected but do not block others.
    Maximal in the sense that every non-forbidden vertex outside the
    result is within spacing - 1 of some chosen vertex.
    """
    if spacing < 2:
        raise ConfigError("net spacing must be >= 2")
    if forbidden is None:
        mask = np.zeros(g.n, dtype=np.uint8)
    else:
        mask = np.zeros(g.n, dtype=np.uint8)
        mask[np.asarray(forbidden, dtype=np.int64)] = 1
    return _kernels.greedy_net(g.nbr, spacing, mask)


@dataclass(frozen=True)
class DensityReport:
    ratio: float
    bound: float
    passes: bool
    hypothesis_ok: bool
    diameter_lb: int
    d: int


def check_density(g: ColoredGraph, net, d: int) -> DensityReport:
    """|net|/|V| against 1/d, with the hypothesis gate d > 2, diam >= 2d.

    The diameter check uses a double-sweep BFS lower bound, which is
    exact on the block families built here; when the hypotheses fail
    the ratio is still reported but nothing is asserted.
    """
    net = np.asarray(net, dtype=np.int64)
    if g.n == 0:
        raise ConfigError("empty graph")
    far, _ = _kernels.farthest_vertex(g.nbr, 0)
    _, diam_lb = _kernels.farthest_vertex(g.nbr, far)
    hypothesis_ok = d > 2 and diam_lb >= 2 * d
    ratio = len(net) / g.n
    return DensityReport(
        ratio=ratio,
        bound=1.0 / d,
        passes=ratio <= 1.0 / d,
        hypothesis_ok=hypothesis_ok,
        diameter_lb=int(diam_lb),
        d=d,
    )


@dataclass
class NetPartition:
    """Nets R_1..R_n plus the remainder part; parts are disjoint and cover V."""

    schedule: NetSchedule
    parts: list[np.ndarray]  # length n: the nets; remainder derived
    n_vertices: int
    covering_measured: list[int] = field(default_factory=list)

    def remainder(self) -> np.ndarray:
        mask = np.ones(self.n_vertices, dtype=bool)
        for p in self.parts:
            mask[p] = False
        return np.nonzero(mask)[0]

    def part_index(self) -> np.ndarray:
        """Per-vertex part id, 1-based; remainder gets len(schedule)+1."""
        out = np.full(self.n_vertices, len(self.schedule) + 1, dtype=np.int32)
        for i, p in enumerate(self.parts, start=1):
            out[p] = i
        return out

    def write_csv(self, path: str) -> None:
        idx = self.part_index()
        with open(path, "w", encoding="ascii") as f:
            f.write("vertex,part\n")
            for v, p in enumerate(idx.tolist()):
                f.write(f"{v},{p}\n")


def verify_net(g: ColoredGraph, net: np.ndarray, spacing: int) -> int:
    """Exact spacing check via one multi-source BFS; returns covering radius.

    With nearest-source labels, two net points at distance < spacing
    force some edge (u,v) with different labels and
    dist(u) + 1 + dist(v) < spacing (walk a shortest path between the
    offending points: labels start and end differently, and every
    crossing edge on it bounds the sum by the path length). Conversely
    any crossing edge sum is a genuine distance between two net points.
    So min over label-boundary edges == min pairwise net distance,
    checked without all-pairs BFS.
    """
    if len(net) == 0:
        raise InvariantError("empty net")
    dist, label = _kernels.multi_source_bfs(g.nbr, np.asarray(net, dtype=np.int64))
    if int(dist.min()) < 0:
        raise InvariantError("net does not reach the whole graph (disconnected input?)")
    for c in range(4):
        row = g.nbr[c]
        u = np.nonzero(row >= 0)[0]
        v = row[u]
        sel = (u < v) & (label[u] != label[v])
        if sel.any():
            sums = dist[u[sel]].astype(np.int64) + 1 + dist[v[sel]]
            m = int(sums.min())
            if m < spacing:
                i = int(sums.argmin())
                raise InvariantError(
                    f"net spacing violated: points {label[u[sel][i]]} and "
                    f"{label[v[sel][i]]} are {m} < {spacing} apart"
                )
    return int(dist.max())


def partition_nets(
    g: ColoredGraph,
    schedule: NetSchedule,
    cover_factor: int = 10,
    require_strict_diam: bool = True,
    diam_multiplier: int = 10,
) -> NetPartition:
    """Greedy multi-scale net partition with full verification.

    R_i is a maximal 2 s_i-net among vertices not already used; the
    remainder is everything else. Precondition in the strict reading:
    diam > 10 s_n; with ``require_strict_diam`` off the gate relaxes to
    diam > diam_multiplier * s_n and the partition conclusions are still
    verified directly below (spacing exactly, covering radius against
    cover_factor * s_i).
    """
    s = schedule.s
    far, _ = _kernels.farthest_vertex(g.nbr, 0)
    _, diam_lb = _kernels.farthest_vertex(g.nbr, far)
    gate = (10 if require_strict_diam else diam_multiplier) * s[-1]
    if diam_lb <= gate:
        raise ConfigError(
            f"partition precondition failed: diameter lower bound {diam_lb} <= {gate}"
        )
    parts: list[np.ndarray] = []
    covering: list[int] = []
    forbidden = np.zeros(g.n, dtype=np.uint8)
    for i, si in enumerate(s, start=1):
        net = _kernels.greedy_net(g.nbr, 2 * si, forbidden)
        if len(net) == 0:
            raise InvariantError(f"net R_{i} came out empty")
        cov = verify_net(g, net, 2 * si)
        if cov > cover_factor * si:
            raise InvariantError(
                f"covering radius {cov} of R_{i} exceeds {cover_factor}*s_{i}"
            )
        covering.append(cov)
        parts.append(net)
        forbidden[net] = 1
    return NetPartition(
        schedule=schedule,
        parts=parts,
        n_vertices=g.n,
        covering_measured=covering,
    )
