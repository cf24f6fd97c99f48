"""A-priori conflict detection between residents' IoT service usage habits."""

from .core import (AllenRelation, ServiceCatalog, ServiceDescriptor, ServiceEvent,
                   TimeInterval, allen_relation, temporal_intersection)
from .engine import (ConflictClass, ConflictReport, ConsistencyTable, OverlapGroup,
                     classify, cluster_by_location, detect, entropy, find_overlap_groups,
                     gain, max_entropy, overlap_groups, temporal_proximity)
from .habits import FuzzyServiceAttribute, MiningParams, ServiceUsageHabit, mine_fsa, mine_habits
from .preprocessing import BinScheme, fit_bins, stabilize

__version__ = "0.1.0"
