"""Exact Z2^2-cover constructions of Horikawa surfaces.

Submodules: :mod:`picard` (lattices and blow-ups), :mod:`linsys` (h0,
positivity, images), :mod:`cover` (building data), :mod:`canonical`
(canonical class analysis), :mod:`horikawa` (geography and components)
and :mod:`cli`.
"""

from .canonical import canonical_image, canonical_positivity, genus2_report
from .cover import (
    BuildingData,
    CoverInvariants,
    blow_up_cover_at_node,
    half_canonical_base_divisor,
    intermediate_double_cover,
    invariants,
    make_building_data,
    resolve_triple_point,
    solve_bundle_data,
    stacked_double_cover_oracle,
    validate_building_data,
)
from .horikawa import admissible, classify, component_count, construct, verify_theorem
from .linsys import MapImageKind, PositivityClass, Verdict, h0, map_image, positivity
from .picard import (
    DivisorClass,
    PointSpec,
    SurfaceModel,
    blow_up,
    exceptional_class,
    intersect,
    make_surface,
    pullback,
)
from .records import ComponentTag, ConstructionRecord, LineTag

__version__ = "0.1.0"
