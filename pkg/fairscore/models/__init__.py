"""Domain types for fairscore."""

from .population import ScoreRecord, GroupKey, GroupPartition
from .distribution import EmpiricalDistribution
from .transport import TransportPlan, MonotoneMap
from .policy import ThetaPolicy, GroupSelector
from .results import BarycenterResult, RepairResult, Ranking, FairnessReport
from .synthetic import SyntheticGroup, SyntheticSpec

__all__ = [
    "ScoreRecord", "GroupKey", "GroupPartition",
    "EmpiricalDistribution",
    "TransportPlan", "MonotoneMap",
    "ThetaPolicy", "GroupSelector",
    "BarycenterResult", "RepairResult", "Ranking", "FairnessReport",
    "SyntheticGroup", "SyntheticSpec",
]
