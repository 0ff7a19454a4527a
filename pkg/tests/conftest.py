import time

import numpy as np
import pytest

from holonomy import ConstructionConfig, build, compute_types

# Session-scoped builds shared across test modules.  The default build is
# a few million vertices and takes several seconds; everything else is
# small.  Fixtures are created lazily, so cheap test files stay cheap.
# Creation times land in TIMINGS (keyed by fixture name) with kernel
# compilation excluded, for the runtime assertions in the acceptance
# tests.

TIMINGS: dict[str, float] = {}


@pytest.fixture(scope="session")
def kernels_warm():
    """Force numba compilation before any timed work runs."""
    from holonomy import _kernels
    from holonomy.graph import GraphBuilder

    gb = GraphBuilder()
    gb.new_vertices(6, stage=0, role="warm")
    for i in range(5):
        gb.add_edge(i, i + 1, i % 2)
    g = gb.freeze()
    nbr = g.nbr
    verts = np.arange(6, dtype=np.int64)
    idx = np.full(6, -1, dtype=np.int32)
    queue = np.empty(max(_kernels.ball_capacity(2), 64), dtype=np.int32)
    _kernels.ball_fingerprints(nbr, verts, 1, idx, queue)
    _kernels.bfs_dist(nbr, 0, -1)
    _kernels.multi_source_bfs(nbr, np.array([0, 5], dtype=np.int64))
    _kernels.component_labels(nbr, 3)
    _kernels.greedy_net(nbr, 2, np.zeros(6, dtype=np.uint8))
    _kernels.free_scan(nbr, verts, 3)
    dist = np.full(6, -1, dtype=np.int32)
    parent = np.empty(6, dtype=np.int32)
    pcolor = np.empty(6, dtype=np.int32)
    _kernels.girth_scan(nbr, verts, 8, dist, parent, pcolor)
    _kernels.farthest_vertex(nbr, 0)
    return True


@pytest.fixture(scope="session")
def ci_config():
    return ConstructionConfig(
        m=11,
        levels=3,
        rng_seed=7,
        diam_multiplier=2,
        girth_target=8,
        chord_span=9,
    )


@pytest.fixture(scope="session")
def ci_build(ci_config, kernels_warm):
    t0 = time.monotonic()
    out = build(ci_config)
    TIMINGS["ci_build"] = time.monotonic() - t0
    return out


@pytest.fixture(scope="session")
def ci_types(ci_build):
    g, log = ci_build
    t0 = time.monotonic()
    table = compute_types(g, 6)
    TIMINGS["ci_types"] = time.monotonic() - t0
    return table


@pytest.fixture(scope="session")
def default_build(kernels_warm):
    t0 = time.monotonic()
    out = build(ConstructionConfig(m=12, levels=3, rng_seed=0))
    TIMINGS["default_build"] = time.monotonic() - t0
    return out


@pytest.fixture(scope="session")
def default_types(default_build):
    # r_max 5 covers both the defect checks (radius 4 needs 5) and the
    # radius-2 measure comparison
    g, _ = default_build
    t0 = time.monotonic()
    table = compute_types(g, 5)
    TIMINGS["default_types"] = time.monotonic() - t0
    return table


@pytest.fixture(scope="session")
def paper_build(kernels_warm):
    return build(
        ConstructionConfig(m=12, levels=2, rng_seed=0, schedule_mode="paper")
    )
