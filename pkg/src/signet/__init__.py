"""Stability of threshold networks on signed graphs.

Structural indices (balance, frustration, stability index), dynamics under
periodic update modes, executable stability checks and long-cycle constructions.
"""

from .analysis import (
    check_parallel_stability,
    check_periodic_stability,
    construct_period2_threshold,
    exists_total_cycle_config,
    total_two_cycle_condition,
    verify_energy_laws,
)
from .constructions import build_cycle, build_superpolynomial, long_cycle_schedule, primes_up_to
from .dynamics import (
    ThresholdNetwork,
    UpdateMode,
    energy2,
    enumerate_attractors,
    format_config,
    orbit,
    parse_config,
    parse_mode,
)
from .errors import (
    BudgetError,
    CertificationError,
    GuardError,
    ParseError,
    PreconditionError,
    SignetError,
)
from .graph import SignedGraph, negate, parse_graph, parse_graph_file, serialize
from .structure import (
    frustration_index,
    is_antibalanced,
    is_balanced,
    max_subgraph_stability,
    rho,
    stability_index,
    structure_report,
)

__version__ = "0.1.0"
