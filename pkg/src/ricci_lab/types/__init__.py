from __future__ import annotations

from .flow import Stalled as Stalled
from .flow import Diverged as Diverged
from .flow import Converged as Converged
from .flow import AlphaMatch as AlphaMatch
from .flow import FlowParams as FlowParams
from .flow import FlowResult as FlowResult
from .flow import CriticalPoint as CriticalPoint
from .flow import TrajectoryRow as TrajectoryRow
from .levels import LevelValue as LevelValue
from .levels import LevelReport as LevelReport
from .levels import CanonicalVariation as CanonicalVariation
from .region import GridSpec as GridSpec
from .region import Predicate as Predicate
from .region import ImagePoint as ImagePoint
from .region import LocusPoint as LocusPoint
from .region import LocusSpec as LocusSpec
from .region import RegionKind as RegionKind
from .region import RegionLabel as RegionLabel
from .region import SweepRecord as SweepRecord
from .spectrum import Spectrum as Spectrum
from .candidate import Candidate as Candidate
from .candidate import DiagTensor as DiagTensor
from .path_state import PathState as PathState
from .path_state import RelaxationRow as RelaxationRow
from .run_config import RunConfig as RunConfig
from .run_config import RunManifest as RunManifest
from .space_spec import Stratum as Stratum
from .space_spec import SpaceSpec as SpaceSpec
from .space_spec import ModuleSpec as ModuleSpec
from .space_spec import TripleSpec as TripleSpec
from .space_spec import SpaceDocument as SpaceDocument
from .metric_point import MetricPoint as MetricPoint
