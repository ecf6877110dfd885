"""Crossed modules of semisimple Hopf algebras and their lattice models.

Sub-modules:

* :mod:`hopfkit.fingroup` -- finite groups from multiplication tables, actions, homomorphisms;
* :mod:`hopfkit.hopf` -- structure-constant Hopf algebras, duals, tensor and smash products,
  axiom checks and Haar integrals;
* :mod:`hopfkit.xmod` -- crossed modules of Hopf algebras built from four-group data;
* :mod:`hopfkit.surface` -- oriented cell decompositions of closed surfaces;
* :mod:`hopfkit.lattice` -- state space, local operators, projectors, ground-state dimension
  and the commutation harness;
* :mod:`hopfkit.oracle` -- brute-force ground-state counts for the group special cases;
* :mod:`hopfkit.cli` -- the ``hopfkit`` command.
"""

from .fingroup import (FiniteGroup, GroupAction, GroupCrossedModule, GroupHom, build_group,
                       conjugation_action, cyclic, dihedral, identity_hom, inversion_action,
                       make_action, make_hom, symmetric, trivial_action, trivial_group,
                       trivial_hom)
from .hopf import (HopfAlgebra, dual_hopf, function_algebra, group_algebra, haar_integral,
                   smash_product, tensor_hopf, verify_hopf_axioms)
from .lattice import (Conventions, ModelInstance, commutation_report, edge_operator,
                      ground_dim, hamiltonian, plaquette_operator, total_dim, vertex_operator)
from .oracle import goxo_ground_count, ooxy_ground_count
from .report import HopfkitError, TooLarge, ValidationReport
from .scalars import FLOAT, RATIONAL
from .surface import (CellComplex, build_standard_complex, dual_complex, reverse_edge,
                      shift_basepoint, sphere_tetrahedron, sphere_theta, torus_grid)
from .xmod import (GexyData, HopfCrossedModule, build_gexy, goxo, kitaev, make_gexy, ooxy,
                   verify_hopf_crossed_module)

__version__ = "0.1.0"

__all__ = [
    "FiniteGroup", "GroupAction", "GroupCrossedModule", "GroupHom", "build_group",
    "conjugation_action", "cyclic", "dihedral", "identity_hom", "inversion_action",
    "make_action", "make_hom", "symmetric", "trivial_action", "trivial_group", "trivial_hom",
    "HopfAlgebra", "dual_hopf", "function_algebra", "group_algebra", "haar_integral",
    "smash_product", "tensor_hopf", "verify_hopf_axioms",
    "Conventions", "ModelInstance", "commutation_report", "edge_operator", "ground_dim",
    "hamiltonian", "plaquette_operator", "total_dim", "vertex_operator",
    "goxo_ground_count", "ooxy_ground_count",
    "HopfkitError", "TooLarge", "ValidationReport", "FLOAT", "RATIONAL",
    "CellComplex", "build_standard_complex", "dual_complex", "reverse_edge", "shift_basepoint",
    "sphere_tetrahedron", "sphere_theta", "torus_grid",
    "GexyData", "HopfCrossedModule", "build_gexy", "goxo", "kitaev", "make_gexy", "ooxy",
    "verify_hopf_crossed_module",
]
