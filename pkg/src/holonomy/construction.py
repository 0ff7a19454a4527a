"""Staged assembly of the nested graph family.

Stage 0 is a single vertex p, stage 1 a triangle reached by a D-edge.
Each later stage n builds a long block H_n (an even cycle at even n, a
chained cubic block at odd n), partitions it by a multi-scale net
schedule, and hangs decorated material off the nets: fresh copies of
earlier stages at the fine nets, the whole previous graph at the
coarsest net, and a colored path realizing one enumerated word at a
reserved remainder vertex x_n.  Vertex ids are append-only, so each
G_n is the prefix [0, |V(G_n)|) of the final graph and the stage
increments Omega_n are contiguous ranges.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels
from .action import apply_word
from .blocks import make_cubic_block, make_cycle_block
from .colors import A, B, C, D, NUM_COLORS
from .errors import BudgetError, ConfigError, InvariantError
from .graph import ColoredGraph, GraphBuilder, d_bridges
from .nets import NetSchedule, partition_nets
from .words import nth_word, word_from_string, word_to_string


@dataclass(frozen=True)
class ConstructionConfig:
    """Build parameters; validation happens at creation time."""

    m: int
    levels: int
    rng_seed: int
    schedule_mode: str = "desk"
    diam_multiplier: int = 10
    girth_target: int = 12
    chord_span: int = 13
    size_budget: int = 40_000_000

    def __post_init__(self):
        if self.schedule_mode not in ("desk", "paper"):
            raise ConfigError(f"unknown schedule mode {self.schedule_mode!r}")
        if self.schedule_mode == "paper":
            if self.m <= 10:
                raise ConfigError(f"paper schedule requires m > 10, got m={self.m}")
        elif self.m < 2:
            raise ConfigError(f"m must be >= 2, got {self.m}")
        if self.levels < 1:
            raise ConfigError(f"levels must be >= 1, got {self.levels}")
        if self.diam_multiplier < 2:
            raise ConfigError(
                f"diam_multiplier must be >= 2, got {self.diam_multiplier}"
            )
        if self.girth_target < 4 or self.girth_target % 2:
            raise ConfigError(
                f"girth_target must be even and >= 4, got {self.girth_target}"
            )
        if self.chord_span % 2 == 0 or self.chord_span < self.girth_target - 1:
            raise ConfigError(
                "chord_span must be odd and >= girth_target - 1, got "
                f"{self.chord_span}"
            )
        if self.rng_seed < 0:
            raise ConfigError(f"rng_seed must be >= 0, got {self.rng_seed}")
        if self.size_budget < 100:
            raise ConfigError(f"size_budget too small: {self.size_budget}")


def schedule_value(mode: str, m: int, stage: int, prev_size: int) -> int:
    """s_stage from the previous graph size; exact integer arithmetic."""
    if mode == "desk":
        return m * max(prev_size, 1)
    return m**stage * 2**prev_size


@dataclass
class CopyTier:
    """One batch of fresh copies of G_{source_level} hung off a net."""

    source_level: int
    copy_size: int
    attach_local: int  # distinguished vertex inside each copy
    first_start: int  # global id of the first copy's vertex 0
    attach_points: list[int]  # global ids, ascending

    def copy_starts(self) -> np.ndarray:
        k = len(self.attach_points)
        return self.first_start + self.copy_size * np.arange(k, dtype=np.int64)


@dataclass
class StageRecord:
    stage: int
    block_kind: str  # "seed" | "cycle" | "cubic"
    h_start: int
    h_stop: int
    block_info: dict | None
    schedule: list[int]  # (s_1 .. s_stage)
    nets: list[list[int]]  # global ids; index i-1 holds R^stage_i
    covering: list[int]
    remainder_size: int
    x: int | None
    r: int
    word: str | None
    path_start: int
    path_stop: int
    witness: int | None
    copies: list[CopyTier]
    original_attach: list[int]  # [vertex in G_{stage-1}, vertex in H_stage]
    omega_start: int
    omega_stop: int
    g_size: int
    ratio_over_h: float
    ratio_over_g: float


@dataclass
class BuildLog:
    config: ConstructionConfig
    sizes: list[int]  # |V(G_n)| for n = 0..levels
    stages: list[StageRecord]  # n = 1..levels
    boundary_edges: list[int] = field(default_factory=list)  # |edge boundary of G_n|
    omega_edges: list[int] = field(default_factory=list)  # |edge boundary of Omega_n|

    @property
    def schedule(self) -> list[int]:
        return list(self.stages[-1].schedule) if self.stages else []

    def stage(self, n: int) -> StageRecord:
        return self.stages[n - 1]

    def omega_range(self, n: int) -> tuple[int, int]:
        if n == 0:
            return (0, 1)
        return (self.sizes[n - 1], self.sizes[n])

    def folner_ratios(self) -> list[float]:
        return [b / s for b, s in zip(self.boundary_edges, self.sizes)]

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "sizes": self.sizes,
            "boundary_edges": self.boundary_edges,
            "omega_edges": self.omega_edges,
            "stages": [asdict(rec) for rec in self.stages],
        }

    def to_json(self, path: str) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f)
            f.write("\n")

    @classmethod
    def from_dict(cls, d: dict) -> "BuildLog":
        stages = []
        for rec in d["stages"]:
            rec = dict(rec)
            rec["copies"] = [CopyTier(**t) for t in rec["copies"]]
            stages.append(StageRecord(**rec))
        return cls(
            config=ConstructionConfig(**d["config"]),
            sizes=list(d["sizes"]),
            stages=stages,
            boundary_edges=list(d["boundary_edges"]),
            omega_edges=list(d["omega_edges"]),
        )

    @classmethod
    def from_json(cls, path: str) -> "BuildLog":
        with open(path) as f:
            return cls.from_dict(json.load(f))


def _approx(v: int) -> str:
    if v < 10**15:
        return str(v)
    # avoid str() on huge ints (CPython caps int-to-decimal conversion)
    return f"about 10^{int(v.bit_length() * 0.30103)}"


def _edges_now(gb: GraphBuilder):
    """Snapshot of all current edges as (us, vs, cs) arrays, u < v."""
    n = gb.n
    out_u, out_v, out_c = [], [], []
    for c in range(NUM_COLORS):
        row = gb._nbr[c, :n]
        us = np.nonzero(row >= 0)[0]
        vs = row[us]
        keep = us < vs
        out_u.append(us[keep].astype(np.int64))
        out_v.append(vs[keep].astype(np.int64))
        out_c.append(np.full(int(keep.sum()), c, dtype=np.int64))
    return np.concatenate(out_u), np.concatenate(out_v), np.concatenate(out_c)


def build(config: ConstructionConfig) -> tuple[ColoredGraph, BuildLog]:
    """Run the staged construction and verify its structural invariants.

    Returns the frozen graph and a log with enough coordinates (ranges,
    net ids, attachment maps, words, witnesses) to re-derive every
    claim made about the build from the graph alone.
    """
    gb = GraphBuilder()
    gb.new_vertices(1, stage=0, role="G_0")  # p = 0
    gb.new_vertices(3, stage=1, role="H_1")  # triangle 1, 2, 3
    gb.add_edge(1, 2, A)
    gb.add_edge(2, 3, B)
    gb.add_edge(1, 3, C)
    gb.add_edge(0, 1, D)  # q = 1
    gb.set_role(2, "r_1")

    sizes = [1, 4]
    distinguished = {0: 0, 1: 2}  # level -> attach vertex for copies of that level
    snapshots: dict[int, tuple] = {}
    if config.levels >= 2:
        snapshots[0] = (
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
        )

    s_vals = [schedule_value(config.schedule_mode, config.m, 1, sizes[0])]
    records = [
        StageRecord(
            stage=1,
            block_kind="seed",
            h_start=1,
            h_stop=4,
            block_info=None,
            schedule=list(s_vals),
            nets=[],
            covering=[],
            remainder_size=0,
            x=None,
            r=2,
            word=None,
            path_start=4,
            path_stop=4,
            witness=None,
            copies=[],
            original_attach=[0, 1],
            omega_start=1,
            omega_stop=4,
            g_size=4,
            ratio_over_h=1 / 3,
            ratio_over_g=1 / 4,
        )
    ]

    if config.levels >= 3:
        snapshots[1] = _edges_now(gb)  # the builder holds exactly G_1 here

    for n in range(2, config.levels + 1):
        s_n = schedule_value(config.schedule_mode, config.m, n, sizes[n - 1])
        s_vals.append(s_n)

        reach = config.diam_multiplier * s_n + 1
        est = 2 * reach if n % 2 == 0 else reach + 1
        if est > config.size_budget:
            raise BudgetError(
                f"stage {n} block needs at least {_approx(est)} vertices, "
                f"budget is {config.size_budget}"
            )

        if n % 2 == 0:
            block = make_cycle_block(reach)
            block_kind = "cycle"
            block_info = {"half_length": reach, "vertices": block.n, "girth": block.n}
        else:
            block = make_cubic_block(
                reach,
                config.girth_target,
                config.chord_span,
                seed=config.rng_seed + n,
                size_budget=config.size_budget,
            )
            block_kind = "cubic"
            block_info = dict(block.block_info)
            block_info["voltages"] = [int(v) for v in block_info["voltages"]]
            if "opened_edge" in block_info:
                block_info["opened_edge"] = [int(v) for v in block_info["opened_edge"]]

        part = partition_nets(
            block,
            NetSchedule(tuple(s_vals)),
            cover_factor=10,
            require_strict_diam=config.diam_multiplier >= 10,
            diam_multiplier=config.diam_multiplier,
        )

        offset = gb.n
        gb.new_vertices(block.n, stage=n, role=f"H_{n}")
        bu, bv, bc = block.edge_arrays()
        for c in range(NUM_COLORS):
            mask = bc == c
            if mask.any():
                gb.add_edges(bu[mask] + offset, bv[mask] + offset, c)
        for i, net in enumerate(part.parts, start=1):
            role = f"R_{n}_{i}"
            for v in net:
                gb.set_role(offset + int(v), role)

        remainder = part.remainder()
        if remainder.size < 2:
            raise InvariantError(
                f"stage {n} remainder has {remainder.size} vertices, need >= 2"
            )
        x_local = int(remainder[0])
        dist = _kernels.bfs_dist(block.nbr, x_local, -1)
        rest = remainder[1:]
        r_local = int(rest[int(np.argmax(dist[rest]))])
        x_g = offset + x_local
        r_g = offset + r_local

        copy_tiers = []
        for i in range(1, n):
            lvl = i - 1
            src_size = sizes[lvl]
            sus, svs, scs = snapshots[lvl]
            pts = part.parts[i - 1].astype(np.int64) + offset
            count = pts.size
            first = gb.n
            gb.new_vertices(count * src_size, stage=n, role=f"copy_of_G_{lvl}")
            starts = first + src_size * np.arange(count, dtype=np.int64)
            for c in range(NUM_COLORS):
                mask = scs == c
                if mask.any():
                    u_c = sus[mask]
                    v_c = svs[mask]
                    gb.add_edges(
                        np.repeat(starts, u_c.size) + np.tile(u_c, count),
                        np.repeat(starts, v_c.size) + np.tile(v_c, count),
                        c,
                    )
            gb.add_edges(pts, starts + distinguished[lvl], D)
            copy_tiers.append(
                CopyTier(
                    source_level=lvl,
                    copy_size=src_size,
                    attach_local=distinguished[lvl],
                    first_start=first,
                    attach_points=pts.tolist(),
                )
            )

        coarse = part.parts[n - 1]
        target = offset + int(coarse[0])
        gb.add_edge(distinguished[n - 1], target, D)

        word = nth_word(n - 1)
        applied = word[::-1]
        ell = len(word)
        path_start = gb.n
        if applied[0] != D:
            path = gb.new_vertices(ell + 1, stage=n, role="word_path")
            y0 = path.start
            gb.add_edge(x_g, y0, D)
            for j in range(1, ell + 1):
                gb.add_edge(y0 + j - 1, y0 + j, applied[j - 1])
            witness = y0
        else:
            path = gb.new_vertices(ell, stage=n, role="word_path")
            y1 = path.start
            gb.add_edge(x_g, y1, D)
            for j in range(2, ell + 1):
                gb.add_edge(y1 + j - 2, y1 + j - 1, applied[j - 1])
            witness = x_g
        path_stop = gb.n
        gb.set_role(x_g, f"x_{n}")
        gb.set_role(r_g, f"r_{n}")

        new_size = gb.n
        attach_size = new_size - block.n
        records.append(
            StageRecord(
                stage=n,
                block_kind=block_kind,
                h_start=offset,
                h_stop=offset + block.n,
                block_info=block_info,
                schedule=list(s_vals),
                nets=[(net + offset).tolist() for net in part.parts],
                covering=list(part.covering_measured),
                remainder_size=int(remainder.size),
                x=x_g,
                r=r_g,
                word=word_to_string(word),
                path_start=path_start,
                path_stop=path_stop,
                witness=witness,
                copies=copy_tiers,
                original_attach=[distinguished[n - 1], target],
                omega_start=sizes[n - 1],
                omega_stop=new_size,
                g_size=new_size,
                ratio_over_h=attach_size / block.n,
                ratio_over_g=attach_size / new_size,
            )
        )
        sizes.append(new_size)
        distinguished[n] = r_g
        if n <= config.levels - 2:
            snapshots[n] = _edges_now(gb)

    g = gb.freeze(connected=True)
    log = BuildLog(config=config, sizes=sizes, stages=records)
    _post_build_checks(g, log)
    return g, log


def _post_build_checks(g: ColoredGraph, log: BuildLog) -> None:
    """Structural invariants every finished build must satisfy."""
    levels = log.config.levels
    bu, bv, _ = g.edge_arrays()
    boundary = []
    for t in log.sizes:
        boundary.append(int(((bu < t) != (bv < t)).sum()))
    omega = []
    lo = 0
    for t in log.sizes:
        in_u = (bu >= lo) & (bu < t)
        in_v = (bv >= lo) & (bv < t)
        omega.append(int((in_u != in_v).sum()))
        lo = t
    log.boundary_edges = boundary
    log.omega_edges = omega

    for n in range(levels):
        if boundary[n] != 1:
            raise InvariantError(f"edge boundary of G_{n} has {boundary[n]} edges")
    if boundary[levels] != 0:
        raise InvariantError("finished graph has a nonempty outer boundary")
    for n, cnt in enumerate(omega):
        if cnt > 2:
            raise InvariantError(f"Omega_{n} boundary has {cnt} > 2 edges")
    ratios = log.folner_ratios()
    for a, b in zip(ratios, ratios[1:]):
        if not b < a:
            raise InvariantError(f"boundary ratios not strictly decreasing: {ratios}")

    if not d_bridges(g):
        raise InvariantError("some D-edge lies on a cycle")

    for rec in log.stages:
        if rec.word is None:
            continue
        w = word_from_string(rec.word)
        image = apply_word(g, w, rec.witness)
        if image == rec.witness:
            raise InvariantError(
                f"stage {rec.stage} witness {rec.witness} fixed by {rec.word}"
            )
        if image != rec.path_stop - 1:
            raise InvariantError(
                f"stage {rec.stage} word walk ended at {image}, "
                f"expected {rec.path_stop - 1}"
            )


def faithfulness_witnesses(
    g: ColoredGraph, log: BuildLog, n_max: int | None = None
) -> list[dict]:
    """Movement certificates: enumerated word w-bar_j against its witness.

    The word attached at stage n is the (n-1)-th in the enumeration, so
    indices run 1..levels-1.  Each entry reports whether the witness
    actually moves under the full graph action.
    """
    out = []
    for rec in log.stages:
        if rec.word is None:
            continue
        idx = rec.stage - 1
        if n_max is not None and idx > n_max:
            continue
        w = word_from_string(rec.word)
        image = apply_word(g, w, rec.witness)
        out.append(
            {
                "word_index": idx,
                "word": rec.word,
                "stage": rec.stage,
                "witness": rec.witness,
                "image": image,
                "moved": image != rec.witness,
            }
        )
    return out
