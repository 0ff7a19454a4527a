"""Staged colored-graph constructions with verified local-statistics reports.

Builds properly 4-edge-colored graphs in stages (cycle and large-girth
cubic blocks, net-indexed attachments, word paths), computes rooted
ball types, empirical measures along the even/odd growth fronts, and
reports the edge-measure vs cost gap between them.
"""

from .colors import A, B, C, D
from .errors import (
    BudgetError,
    ConfigError,
    HolonomyError,
    InvariantError,
    ProperColoringError,
)
from .graph import (
    BallType,
    ColoredGraph,
    GraphBuilder,
    RootedBall,
    canonical_code,
    d_bridges,
    read_json,
    write_json,
)
from .words import IDENTITY, nth_word, reduce, word_from_string, word_to_string
from .action import (
    apply_word,
    dihedral_demo,
    is_free,
    orbit,
    schreier_graph,
)
from .nets import (
    NetPartition,
    NetSchedule,
    check_density,
    greedy_maximal_net,
    partition_nets,
    verify_net,
)
from .blocks import make_cubic_block, make_cycle_block
from .construction import (
    BuildLog,
    ConstructionConfig,
    build,
    faithfulness_witnesses,
)
from .typespace import (
    StableRegion,
    TypeTable,
    compute_types,
    genericity_report,
    holonomy_radius,
    pushforward_defect,
    transport_check,
)
from .measures import (
    CostReport,
    EmpiricalMeasure,
    compare_measures,
    cost_estimate,
    edge_measure,
    empirical_measure,
    free_fraction,
    gap_report,
)

__version__ = "0.1.0"

__all__ = [
    "A",
    "B",
    "C",
    "D",
    "BallType",
    "BudgetError",
    "BuildLog",
    "ColoredGraph",
    "ConfigError",
    "ConstructionConfig",
    "CostReport",
    "EmpiricalMeasure",
    "GraphBuilder",
    "HolonomyError",
    "IDENTITY",
    "InvariantError",
    "NetPartition",
    "NetSchedule",
    "ProperColoringError",
    "RootedBall",
    "StableRegion",
    "TypeTable",
    "apply_word",
    "build",
    "canonical_code",
    "check_density",
    "compare_measures",
    "compute_types",
    "cost_estimate",
    "d_bridges",
    "dihedral_demo",
    "edge_measure",
    "empirical_measure",
    "faithfulness_witnesses",
    "free_fraction",
    "gap_report",
    "genericity_report",
    "greedy_maximal_net",
    "holonomy_radius",
    "is_free",
    "make_cubic_block",
    "make_cycle_block",
    "nth_word",
    "orbit",
    "partition_nets",
    "pushforward_defect",
    "read_json",
    "reduce",
    "schreier_graph",
    "transport_check",
    "verify_net",
    "word_from_string",
    "word_to_string",
    "write_json",
    "__version__",
]
