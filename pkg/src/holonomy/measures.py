"""Empirical type distributions, edge-biased weights, and the
free-fraction cost comparison between two growth regions.

The two-route rule: the edge measure of a region can be computed from
its type distribution (each type carries the root degree recoverable
from its ball code) or directly from vertex degrees.  For radius >= 1
the routes agree exactly, and the exact check runs in rational
arithmetic so float rounding can never mask a real mismatch.  At
radius 0 a spanned ball is a bare root, the recoverable degree is 0,
and the type route degenerates to 0 by design.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import ConfigError
from .graph import ColoredGraph
from .typespace import TypeTable, _omega_vertices

__all__ = [
    "EmpiricalMeasure",
    "empirical_measure",
    "edge_measure",
    "edge_measure_fraction",
    "edge_measure_direct",
    "free_fraction",
    "cost_estimate",
    "compare_measures",
    "gap_report",
    "CostReport",
]


@dataclass
class EmpiricalMeasure:
    """Distribution of radius-r types over one region of roots."""

    radius: int
    fingerprints: np.ndarray  # (k, 2) uint64, types with positive mass
    counts: np.ndarray  # int64
    freqs: np.ndarray  # float64, sums to 1
    root_degrees: np.ndarray  # int32, recovered from the type codes
    source: str
    sample_size: int

    def as_dict(self) -> dict:
        key = [f"{int(h):016x}{int(l):016x}" for l, h in self.fingerprints]
        return dict(zip(key, self.freqs.tolist()))


def empirical_measure(
    g: ColoredGraph,
    table: TypeTable,
    r: int,
    region,
    source: str = "",
) -> EmpiricalMeasure:
    if not (0 <= r <= table.r_max):
        raise ConfigError(f"radius {r} outside table range 0..{table.r_max}")
    verts = _omega_vertices(region)
    if verts.size == 0:
        raise ConfigError("empty region for empirical measure")
    ids = table.classes_of_vertices(r, verts)
    counts = np.bincount(ids, minlength=table.n_classes(r)).astype(np.int64)
    present = counts > 0
    kept = counts[present]
    return EmpiricalMeasure(
        radius=r,
        fingerprints=table.fingerprints[r][present],
        counts=kept,
        freqs=kept / kept.sum(),
        root_degrees=table.root_degrees[r][present],
        source=source,
        sample_size=int(kept.sum()),
    )


def edge_measure(mu: EmpiricalMeasure) -> float:
    """Half the type-averaged root degree; float route."""
    return float((mu.freqs * mu.root_degrees).sum() / 2.0)


def edge_measure_fraction(mu: EmpiricalMeasure) -> Fraction:
    """Same quantity in exact rational arithmetic."""
    num = int((mu.counts * mu.root_degrees.astype(np.int64)).sum())
    return Fraction(num, 2 * mu.sample_size)


def edge_measure_direct(g: ColoredGraph, region) -> Fraction:
    """Degree route: half the average degree over the region, exact."""
    verts = _omega_vertices(region)
    if verts.size == 0:
        raise ConfigError("empty region")
    degs = (g.nbr[:, verts] >= 0).sum(axis=0)
    return Fraction(int(degs.sum()), 2 * verts.size)


def free_fraction(
    g: ColoredGraph,
    region,
    k: int,
    girth_hint: int | None = None,
) -> float:
    """Fraction of the region fixed by no reduced 3-letter word of
    length <= k (missing edges act as stays and stays count)."""
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    verts = _omega_vertices(region)
    if verts.size == 0:
        raise ConfigError("empty region")
    if girth_hint is not None and k >= girth_hint:
        warnings.warn(
            f"free test length k={k} reaches the girth {girth_hint}; "
            "short cycles can now fix vertices",
            stacklevel=2,
        )
    flags = _kernels.free_scan(g.nbr, verts, k)
    return float(flags.sum() / verts.size)


def cost_estimate(free_frac: float) -> float:
    """Map a free fraction through 1 + f/2; lands in [1, 3/2]."""
    if not (0.0 <= free_frac <= 1.0):
        raise ConfigError(f"free fraction {free_frac} outside [0, 1]")
    return 1.0 + free_frac / 2.0


def compare_measures(a: EmpiricalMeasure, b: EmpiricalMeasure) -> dict:
    """Total variation distance plus the largest per-type discrepancies."""
    if a.radius != b.radius:
        raise ConfigError(
            f"cannot compare measures at radii {a.radius} and {b.radius}"
        )
    fa = {(int(l), int(h)): float(p) for (l, h), p in zip(a.fingerprints, a.freqs)}
    fb = {(int(l), int(h)): float(p) for (l, h), p in zip(b.fingerprints, b.freqs)}
    keys = sorted(set(fa) | set(fb))
    rows = []
    tv = 0.0
    for key in keys:
        pa = fa.get(key, 0.0)
        pb = fb.get(key, 0.0)
        tv += abs(pa - pb)
        rows.append((abs(pa - pb), key, pa, pb))
    rows.sort(key=lambda t: (-t[0], t[1]))
    top = [
        {
            "fingerprint": f"{h:016x}{l:016x}",
            "freq_a": pa,
            "freq_b": pb,
            "diff": d,
        }
        for d, (l, h), pa, pb in rows[:10]
    ]
    # float accumulation can land a hair above the true value; the
    # distance itself never exceeds 1
    return {"radius": a.radius, "tv": min(1.0, tv / 2.0), "top": top}


@dataclass
class CostReport:
    m: int
    levels: int
    r: int
    k: int
    edge_measure_mu1: float
    free_fraction_mu2: float
    cost_estimate_mu2: float
    tv_distance: float
    gap: float
    detail: dict = field(default_factory=dict, repr=False, compare=False)

    def to_json(self, path: str) -> None:
        payload = {
            "m": self.m,
            "levels": self.levels,
            "r": self.r,
            "k": self.k,
            "edge_measure_mu1": self.edge_measure_mu1,
            "free_fraction_mu2": self.free_fraction_mu2,
            "cost_estimate_mu2": self.cost_estimate_mu2,
            "tv_distance": self.tv_distance,
            "gap": self.gap,
        }
        with open(path, "w") as f:
            json.dump(payload, f, indent=2)
            f.write("\n")


def gap_report(
    g: ColoredGraph,
    table: TypeTable,
    log,
    r: int = 2,
    k: int = 5,
) -> CostReport:
    """Edge measure of the largest even-stage increment against the
    free-fraction cost of the largest odd-stage increment.

    mu1 lives on the biggest Omega from an even stage >= 2, mu2 on the
    biggest from an odd stage >= 3; the gap is the cost of mu2 minus
    the edge measure of mu1.
    """
    even = [rec for rec in log.stages if rec.stage >= 2 and rec.stage % 2 == 0]
    odd = [rec for rec in log.stages if rec.stage >= 2 and rec.stage % 2 == 1]
    if not even or not odd:
        raise ConfigError(
            "insufficient levels: need an even and an odd stage beyond stage 1"
        )
    rec1 = max(even, key=lambda rec: rec.omega_stop - rec.omega_start)
    rec2 = max(odd, key=lambda rec: rec.omega_stop - rec.omega_start)
    om1 = (rec1.omega_start, rec1.omega_stop)
    om2 = (rec2.omega_start, rec2.omega_stop)

    mu1 = empirical_measure(g, table, r, om1, source=f"omega_{rec1.stage}")
    mu2 = empirical_measure(g, table, r, om2, source=f"omega_{rec2.stage}")
    e1 = edge_measure(mu1)
    ff2 = free_fraction(g, om2, k)
    cost2 = cost_estimate(ff2)
    cmp = compare_measures(mu1, mu2)

    return CostReport(
        m=log.config.m,
        levels=log.config.levels,
        r=r,
        k=k,
        edge_measure_mu1=e1,
        free_fraction_mu2=ff2,
        cost_estimate_mu2=cost2,
        tv_distance=cmp["tv"],
        gap=cost2 - e1,
        detail={
            "mu1_stage": rec1.stage,
            "mu2_stage": rec2.stage,
            "mu1_size": rec1.omega_stop - rec1.omega_start,
            "mu2_size": rec2.omega_stop - rec2.omega_start,
            "edge_measure_mu1_exact": edge_measure_fraction(mu1),
            "edge_measure_mu1_direct": edge_measure_direct(g, om1),
            "top_discrepancies": cmp["top"],
        },
    )
