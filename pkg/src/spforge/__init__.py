"""Exact computations with quivers, superpotentials and their PBW deformations."""

from __future__ import annotations

from .cyclotomic import CyclotomicNumber, cyc, parse_scalar, zeta
from .expr import ParseError
from .formats import (
    fixture_path,
    parse_group_file,
    parse_quiver_file,
    parse_superpotential,
    parse_superpotential_file,
    parse_theta_file,
)
from .groups import (
    CharacterTable,
    McKayQuiver,
    MatrixGroup,
    character_table,
    enumerate_group,
    is_small,
    mckay_quiver,
    symplectic_reflections,
)
from .pbw import (
    ThetaMap,
    check_pbw,
    check_wz,
    check_zero_pbw,
    deformation_space,
    koszul_intersection,
    psi,
)
from .quiver import Path, PathAlgebraElement, Quiver, left_derivative, right_derivative
from .superpotential import Superpotential, Twist, check_condition, relation_space

__version__ = "0.1.0"

__all__ = [
    "CharacterTable", "CyclotomicNumber", "MatrixGroup", "McKayQuiver", "ParseError", "Path",
    "PathAlgebraElement", "Quiver", "Superpotential", "ThetaMap", "Twist", "character_table",
    "check_condition", "check_pbw", "check_wz", "check_zero_pbw", "cyc", "deformation_space",
    "enumerate_group", "fixture_path", "is_small", "koszul_intersection", "left_derivative",
    "mckay_quiver", "parse_group_file", "parse_quiver_file", "parse_scalar", "parse_superpotential",
    "parse_superpotential_file", "parse_theta_file", "psi", "relation_space", "right_derivative",
    "symplectic_reflections", "zeta",
]
