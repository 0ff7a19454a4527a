"""Type tables, stability, holonomy radii, pushforward defects, transport."""

import numpy as np
import pytest

from helpers import nx_distances_from
from holonomy.action import apply_word
from holonomy.blocks import make_cycle_block
from holonomy.colors import A, B, C, D
from holonomy.errors import ConfigError
from holonomy.graph import GraphBuilder, canonical_code, fingerprint_code
from holonomy.typespace import (
    StableRegion,
    compute_types,
    determination_audit,
    genericity_report,
    holonomy_radius,
    pushforward_defect,
    transport_check,
    write_holonomy_csv,
    write_type_csv,
)
from holonomy.words import word_from_string
from test_graph_core import seed_triangle

# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


def test_table_shapes(small_table):
    g, t = small_table
    assert t.full
    assert t.n_graph == g.n
    assert t.ids.shape == (4, g.n)
    for r in range(4):
        assert int(t.counts[r].sum()) == g.n
        assert t.fingerprints[r].shape == (t.counts[r].size, 2)
        assert len(t.reps[r]) == t.counts[r].size


@pytest.fixture(scope="module")
def small_table():
    from holonomy.construction import ConstructionConfig, build

    g, _ = build(ConstructionConfig(m=12, levels=2, rng_seed=0))
    return g, compute_types(g, 3)


def test_table_matches_direct_codes(small_table):
    # kernel fingerprints must equal the pure-python canonical route
    g, t = small_table
    rng = np.random.default_rng(0)
    for v in rng.integers(0, g.n, size=30).tolist():
        for r in (0, 1, 2, 3):
            fp = fingerprint_code(canonical_code(g.ball(v, r)).code)
            row = t.fingerprints[r][t.ids[r, v]]
            assert (int(row[0]), int(row[1])) == fp


def test_refinement(small_table):
    g, t = small_table
    for r in (1, 2, 3):
        # same class at r forces same class at r-1, and the parent map
        # records exactly that coarsening
        assert np.array_equal(t.parents[r][t.ids[r]], t.ids[r - 1])


def test_class_reps_are_lowest_members(small_table):
    g, t = small_table
    for r in (0, 1, 2):
        for cid, rep in enumerate(t.reps[r].tolist()):
            members = np.nonzero(t.ids[r] == cid)[0]
            assert rep == members.min()


def test_root_degrees(small_table):
    g, t = small_table
    degs = g.degrees()
    for r in (1, 2, 3):
        assert np.array_equal(t.root_degrees[r][t.ids[r]], degs)
    assert (t.root_degrees[0] == 0).all()


def test_region_restricted_table(small_table):
    g, full = small_table
    region = np.arange(100, 200)
    t = compute_types(g, 2, region=region, audit_samples=8)
    assert not t.full
    assert np.array_equal(t.verts, region)
    got = t.classes_of_vertices(2, np.array([150]))
    fp_sub = t.fingerprints[2][got[0]]
    fp_full = full.fingerprints[2][full.ids[2, 150]]
    assert np.array_equal(fp_sub, fp_full)
    with pytest.raises(ConfigError, match="outside the typed region"):
        t.classes_of_vertices(2, np.array([50]))


def test_cycle_single_type():
    g = make_cycle_block(10)
    t = compute_types(g, 3)
    for r in range(4):
        assert t.counts[r].tolist() == [20]
    assert holonomy_radius(g, t, 2, 0) == 0


def test_seed_triangle_types():
    g = seed_triangle()
    t = compute_types(g, 2)
    assert t.counts[0].tolist() == [4]
    assert t.counts[1].size == 4
    # covering radius of the pendant's singleton class: eccentricity 2
    cls0 = int(t.ids[1, 0])
    assert holonomy_radius(g, t, 1, cls0) == 2
    mask = np.zeros(4, dtype=bool)
    mask[[0, 1]] = True
    assert holonomy_radius(g, t, 1, cls0, stable_mask=mask) == 1


def test_holonomy_radius_unreachable_is_inf():
    gb = GraphBuilder()
    gb.new_vertices(4, stage=0, role="t")
    gb.add_edge(0, 1, A)
    gb.add_edge(2, 3, B)
    g = gb.freeze()
    t = compute_types(g, 1)
    cls0 = int(t.ids[1, 0])
    m = holonomy_radius(g, t, 1, cls0, stable_mask=np.ones(4, dtype=bool))
    assert m == float("inf")


# ---------------------------------------------------------------------------
# stable regions and genericity
# ---------------------------------------------------------------------------


def test_stable_region_semantics(small_table):
    g, _ = small_table
    attach = 487
    sr = StableRegion(g, attach)
    oracle = nx_distances_from(g, attach)
    for r in (0, 2, 5):
        mask = sr.mask(r)
        want = np.array([oracle[v] > r for v in range(g.n)])
        assert np.array_equal(mask, want)
        assert sr.count(r) == int(want.sum())
        assert np.array_equal(sr.vertices(r), np.nonzero(want)[0])


def test_stable_region_from_build(ci_build):
    g, log = ci_build
    sr = StableRegion.from_build(g, log)
    assert sr.attach_vertex == log.stages[-1].r


def test_genericity_report(ci_build, ci_types):
    g, _ = ci_build
    rep = genericity_report(g, ci_types, np.arange(4))
    assert rep["size"] == 4
    assert rep["separated_at"] == 1
    assert rep["distinct_by_radius"][0] < 4
    assert rep["distinct_by_radius"][1] == 4


# ---------------------------------------------------------------------------
# pushforward defects
# ---------------------------------------------------------------------------


def test_defect_no_boundary_is_zero():
    g = make_cycle_block(10)
    t = compute_types(g, 3)
    for gen in range(4):
        pf = pushforward_defect(g, t, gen, (0, 20), 2)
        assert pf["boundary_edges"] == 0
        assert pf["defect"] == 0
        assert pf["determined"] and pf["exact"] and pf["ok"]


def test_defect_segment_of_cycle():
    g = make_cycle_block(10)
    t = compute_types(g, 3)
    pf = pushforward_defect(g, t, B, (0, 10), 2)
    # segment [0, 10) has exactly the two B-edges (9,10) and (19,0) leaving it
    assert pf["boundary_edges"] == 2
    assert pf["bound"] == 4
    assert pf["defect"] <= pf["bound"]
    assert pf["ok"]
    assert pf["tau"].sum() == 10
    assert pf["direct"].sum() == 10


def test_defect_on_build(small_table):
    g, t = small_table
    saw_positive = False
    for gen in range(4):
        for r in (1, 2):
            pf = pushforward_defect(g, t, gen, (4, 1008), r)
            assert pf["determined"], (gen, r)
            assert pf["exact"], (gen, r)
            assert pf["defect"] <= pf["bound"], (gen, r)
            assert pf["ok"]
            saw_positive = saw_positive or pf["defect"] > 0
    assert saw_positive  # the bound is not vacuous on real regions


def test_defect_array_region_matches_range(small_table):
    g, t = small_table
    pf_range = pushforward_defect(g, t, A, (4, 1008), 1)
    pf_array = pushforward_defect(g, t, A, np.arange(4, 1008), 1)
    assert pf_range["defect"] == pf_array["defect"]
    assert np.array_equal(pf_range["tau"], pf_array["tau"])


def test_defect_needs_finer_types(small_table):
    g, t = small_table
    with pytest.raises(ConfigError, match="needs types at 4"):
        pushforward_defect(g, t, A, (4, 1008), 3)


def test_determination_audit(small_table):
    g, t = small_table
    assert determination_audit(g, t, 1)
    assert determination_audit(g, t, 2)


# ---------------------------------------------------------------------------
# transport
# ---------------------------------------------------------------------------


def test_transport_already_there():
    g = seed_triangle()
    t = compute_types(g, 1)
    res = transport_check(g, t, 2, int(t.ids[1, 2]), 1, 4)
    # "target" echoes the vertex reached, here x itself
    assert res == {"found": True, "word": "", "target": 2, "steps": 0}


def test_transport_finds_and_verifies():
    g = seed_triangle()
    t = compute_types(g, 1)
    target = int(t.ids[1, 2])
    res = transport_check(g, t, 0, target, 1, 4)
    assert res["found"]
    w = word_from_string(res["word"])
    assert len(w) == res["steps"]
    landing = apply_word(g, w, 0)
    assert landing == res["target"]
    assert int(t.ids[1, landing]) == target


def test_transport_budget_exhausted():
    g = seed_triangle()
    t = compute_types(g, 1)
    target = int(t.ids[1, 2])
    res = transport_check(g, t, 0, target, 1, 1)
    assert not res["found"]
    assert res["word"] is None


def test_transport_larger_graph(small_table):
    g, t = small_table
    rng = np.random.default_rng(1)
    for _ in range(10):
        x = int(rng.integers(g.n))
        y = int(rng.integers(g.n))
        target = int(t.ids[2, y])
        res = transport_check(g, t, x, target, 2, 40)
        if res["found"]:
            landing = apply_word(g, word_from_string(res["word"]), x)
            assert landing == res["target"]
            assert int(t.ids[2, landing]) == target


# ---------------------------------------------------------------------------
# CSV outputs
# ---------------------------------------------------------------------------


def test_type_csv(tmp_path):
    g = seed_triangle()
    t = compute_types(g, 1)
    p = tmp_path / "types.csv"
    write_type_csv(t, str(p))
    lines = p.read_text().strip().splitlines()
    assert lines[0] == "radius,class,count,root_degree,fingerprint,parent"
    assert len(lines) == 1 + 1 + 4  # one class at r=0, four at r=1
    assert lines[1].startswith("0,0,4,0,")
    assert lines[1].endswith(",")  # no parent at radius 0
    # fingerprint field matches the hex accessor
    assert lines[2].split(",")[4] == t.fingerprint_hex(1, 0)


def test_holonomy_csv_finite_and_inf(tmp_path):
    gb = GraphBuilder()
    gb.new_vertices(4, stage=0, role="t")
    gb.add_edge(0, 1, A)
    gb.add_edge(2, 3, B)
    g = gb.freeze()
    t = compute_types(g, 1)
    p = tmp_path / "hol.csv"
    write_holonomy_csv(g, t, 1, str(p), stable_mask=np.ones(4, dtype=bool))
    lines = p.read_text().strip().splitlines()
    assert lines[0] == "radius,class,count,m_alpha"
    assert all(line.endswith(",inf") for line in lines[1:])

    g2 = seed_triangle()
    t2 = compute_types(g2, 1)
    p2 = tmp_path / "hol2.csv"
    write_holonomy_csv(g2, t2, 1, str(p2))
    body = p2.read_text().strip().splitlines()[1:]
    assert all(int(line.rsplit(",", 1)[1]) >= 0 for line in body)
