"""Exact computations for moduli of sheaves on K3 surfaces: Mukai lattices, potential walls, P-type sublattices, line
classes, Hilbert-square cones and monodromy orbit invariants."""

from .cones import ConeReport, hilb2_cones, wall_meets_movable
from .lattice import (
    DiscElement,
    DiscGroup,
    IntLattice,
    LatticeError,
    discriminant_group,
    divisibility,
    orthogonal_complement,
    pair,
    saturate,
    smith_normal_form,
)
from .monodromy import orbit_count_bound, orbit_invariants, same_orbit
from .mukai import (
    AlgMukaiLattice,
    CurveClass,
    HilbPreset,
    K3Picard,
    MukaiVector,
    PointedPeriod,
    hilbert_preset,
    mukai_pairing,
    theta_dual,
    to_h_delta_coords,
)
from .planes import (
    fibration_section_search,
    mori_extremal_generators,
    numeric_criteria,
    plane_line_certificate,
)
from .pointed import PointedSublattice
from .quadform import BinaryForm, represent_bounded, represent_pell, spherical_with_pairing
from .surd import Surd
from .walls import (
    Partition,
    StratumInfo,
    WallKind,
    classify_stratum,
    classify_wall,
    decompose_v,
    enumerate_partitions,
    is_p_type,
    line_class,
    minimalize,
    refines,
)

__version__ = "0.1.0"

__all__ = [
    "AlgMukaiLattice",
    "BinaryForm",
    "ConeReport",
    "CurveClass",
    "DiscElement",
    "DiscGroup",
    "HilbPreset",
    "IntLattice",
    "K3Picard",
    "LatticeError",
    "MukaiVector",
    "Partition",
    "PointedPeriod",
    "PointedSublattice",
    "StratumInfo",
    "Surd",
    "WallKind",
    "classify_stratum",
    "classify_wall",
    "decompose_v",
    "discriminant_group",
    "divisibility",
    "enumerate_partitions",
    "fibration_section_search",
    "hilb2_cones",
    "hilbert_preset",
    "is_p_type",
    "line_class",
    "minimalize",
    "mori_extremal_generators",
    "mukai_pairing",
    "numeric_criteria",
    "orbit_count_bound",
    "orbit_invariants",
    "orthogonal_complement",
    "pair",
    "plane_line_certificate",
    "refines",
    "represent_bounded",
    "represent_pell",
    "same_orbit",
    "saturate",
    "smith_normal_form",
    "spherical_with_pairing",
    "theta_dual",
    "to_h_delta_coords",
    "wall_meets_movable",
]
