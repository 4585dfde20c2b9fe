"""permpart: invariant partitions and classification of finite permutation groups.

The package decides primitivity, quasiprimitivity, pre-primitivity and
pre-synchronization for transitive groups, builds the standard construction
families (regular actions, holomorphs, direct, wreath and diagonal products),
enumerates small brute-force catalogs, and runs per-degree surveys over
catalog files.
"""

from .errors import (
    BudgetExceeded,
    DegreeMismatch,
    NotInvariantError,
    NotSubgroupError,
    NotTransitiveError,
    ParseError,
    PermpartError,
)
from .permcore import (
    BlockAction,
    Perm,
    PermGroup,
    action_on_blocks,
    coset_action,
    elements_bounded,
    format_perm,
    is_normal,
    normal_closure,
    orbit_data,
    parse_perm,
    perm_algebra,
    point_stabilizer,
    stabilizer_chain,
    stabilizers,
)

__all__ = [
    "BudgetExceeded", "DegreeMismatch", "NotInvariantError", "NotSubgroupError",
    "NotTransitiveError", "ParseError", "PermpartError",
    "BlockAction", "Perm", "PermGroup", "action_on_blocks", "coset_action",
    "elements_bounded", "format_perm", "is_normal", "normal_closure",
    "orbit_data", "parse_perm", "perm_algebra", "point_stabilizer",
    "stabilizer_chain", "stabilizers",
]

__version__ = "0.1.0"
