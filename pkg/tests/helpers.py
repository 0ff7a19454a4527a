"""Shared test utilities: random colored graphs and networkx oracles.

networkx is used only here, as an independent reference for rooted
isomorphism, distances, and girth; the package itself never imports it.
"""

from __future__ import annotations

import networkx as nx
import numpy as np
from networkx.algorithms import isomorphism as iso

from holonomy.graph import ColoredGraph, GraphBuilder, RootedBall

NCOLORS = 4


def random_proper_graph(rng: np.random.Generator, n: int, density: float = 0.6):
    """Random properly colored graph: one random partial matching per color.

    Not necessarily connected; parallel edges of different colors can
    occur, loops cannot.
    """
    gb = GraphBuilder()
    gb.new_vertices(n, stage=0, role="rand")
    for c in range(NCOLORS):
        perm = rng.permutation(n)
        for i in range(0, n - 1, 2):
            if rng.random() < density:
                gb.add_edge(int(perm[i]), int(perm[i + 1]), c)
    return gb.freeze()


def random_connected_colored(
    rng: np.random.Generator, n: int, extra: float = 0.3, max_tries: int = 200
):
    """Random connected properly colored graph on n vertices.

    Grows a random colored tree vertex by vertex, then sprinkles extra
    edges where both endpoints have the color slot free.
    """
    for _ in range(max_tries):
        slots = np.full((NCOLORS, n), -1, dtype=np.int64)
        edges = []
        ok = True
        for v in range(1, n):
            cands = [
                (int(p), c)
                for p in rng.permutation(v)[: min(v, 8)]
                for c in range(NCOLORS)
                if slots[c, p] < 0 and slots[c, v] < 0
            ]
            if not cands:
                ok = False
                break
            p, c = cands[int(rng.integers(len(cands)))]
            slots[c, p] = v
            slots[c, v] = p
            edges.append((p, v, c))
        if not ok:
            continue
        for _ in range(int(extra * n)):
            u, v = int(rng.integers(n)), int(rng.integers(n))
            c = int(rng.integers(NCOLORS))
            if u != v and slots[c, u] < 0 and slots[c, v] < 0:
                slots[c, u] = v
                slots[c, v] = u
                edges.append((u, v, c))
        gb = GraphBuilder()
        gb.new_vertices(n, stage=0, role="rand")
        for u, v, c in edges:
            gb.add_edge(u, v, c)
        return gb.freeze(connected=True)
    raise RuntimeError("could not generate a connected colored graph")


def to_nx(g: ColoredGraph) -> nx.MultiGraph:
    G = nx.MultiGraph()
    G.add_nodes_from(range(g.n))
    u, v, c = g.edge_arrays()
    for a, b, k in zip(u.tolist(), v.tolist(), c.tolist()):
        G.add_edge(a, b, color=int(k))
    return G


def ball_to_nx(b: RootedBall) -> nx.MultiGraph:
    G = nx.MultiGraph()
    for i in range(b.size):
        G.add_node(i, root=(i == 0))
    for c in range(NCOLORS):
        for i in range(b.size):
            j = int(b.local_nbr[c, i])
            if 0 <= j and i < j:
                G.add_edge(i, j, color=c)
            elif j == i:
                raise AssertionError("loop in ball")
    return G


_NODE_MATCH = iso.categorical_node_match("root", False)
_EDGE_MATCH = iso.categorical_multiedge_match("color", -1)


def rooted_isomorphic(ba: RootedBall, bb: RootedBall) -> bool:
    """Independent rooted colored-graph isomorphism via VF2."""
    if ba.size != bb.size:
        return False
    return nx.is_isomorphic(
        ball_to_nx(ba), ball_to_nx(bb), node_match=_NODE_MATCH, edge_match=_EDGE_MATCH
    )


def nx_distances_from(g: ColoredGraph, source: int) -> dict:
    return nx.single_source_shortest_path_length(to_nx(g), source)


def nx_all_pairs_distances(g: ColoredGraph) -> dict:
    return dict(nx.all_pairs_shortest_path_length(to_nx(g)))


def nx_girth(g: ColoredGraph):
    G = to_nx(g)
    simple = nx.Graph(G)
    if G.number_of_edges() != simple.number_of_edges():
        return 2  # a parallel pair is a 2-cycle
    return nx.girth(simple)


def permuted_copy(g: ColoredGraph, perm: np.ndarray) -> ColoredGraph:
    gb = GraphBuilder()
    gb.new_vertices(g.n, stage=0, role="perm")
    u, v, c = g.edge_arrays()
    for a, b, k in zip(perm[u].tolist(), perm[v].tolist(), c.tolist()):
        gb.add_edge(int(a), int(b), int(k))
    return gb.freeze()


def run_code_oracle_cases(n_cases: int, seed: int):
    """Compare canonical-code equality against VF2 rooted isomorphism.

    Mixes same-graph pairs, independent pairs, relabeled copies (these
    must always agree), and cycle pairs so both equal and unequal
    outcomes occur often. Returns (n_equal, n_unequal, mismatches).
    """
    from holonomy.blocks import make_cycle_block
    from holonomy.graph import canonical_code

    rng = np.random.default_rng(seed)
    n_equal = n_unequal = 0
    mismatches = []
    for case in range(n_cases):
        mode = int(rng.integers(4))
        r = int(rng.integers(1, 4))
        if mode == 0:
            g = random_proper_graph(rng, int(rng.integers(6, 28)))
            ba = g.ball(int(rng.integers(g.n)), r)
            bb = g.ball(int(rng.integers(g.n)), r)
        elif mode == 1:
            g = random_proper_graph(rng, int(rng.integers(6, 28)))
            h = random_proper_graph(rng, g.n)
            ba = g.ball(int(rng.integers(g.n)), r)
            bb = h.ball(int(rng.integers(h.n)), r)
        elif mode == 2:
            g = random_proper_graph(rng, int(rng.integers(6, 28)))
            perm = rng.permutation(g.n)
            h = permuted_copy(g, perm)
            x = int(rng.integers(g.n))
            ba = g.ball(x, r)
            bb = h.ball(int(perm[x]), r)
        else:
            ga = make_cycle_block(int(rng.integers(3, 12)))
            gb = make_cycle_block(int(rng.integers(3, 12)))
            ba = ga.ball(int(rng.integers(ga.n)), r)
            bb = gb.ball(int(rng.integers(gb.n)), r)
        same_code = canonical_code(ba).code == canonical_code(bb).code
        same_iso = rooted_isomorphic(ba, bb)
        if same_code != same_iso:
            mismatches.append((case, mode, r, same_code, same_iso))
        if same_iso:
            n_equal += 1
        else:
            n_unequal += 1
    return n_equal, n_unequal, mismatches
