"""Finite-model checks for fibered semi-groups over finite sets, their
bimodules, oriented 1+1 cobordism combinatorics, gluing-compatible local
theories, and the cylinder construction that turns a theory into a
functor out of the cobordism double category.

Everything is exhaustively checkable: sets are finite, maps are tables,
and every law ships with a validator that returns a Report.
"""

from .bimod import (EquivariantMorphism, FiberedBimodule, hcompose,
                    hcompose_mor, identity_bimodule, identity_morphism,
                    is_rigid_bimodule, validate_bimodule)
from .ccob import (CobDiffeo, CobObject, Cobordism, GluingTriple,
                   ObjectDiffeo, composition_triple, cylinder,
                   disjoint_union_cob, disjoint_union_objects, glue,
                   glue_triple)
from .cyl import (CylinderFunctor, FunctorUniverse, associator,
                  cylinder_bimodule, cylinder_semigroup,
                  verify_double_functor)
from .errors import InputError, TheoryViolation
from .finset import FinMap, FinSet, fiber_product
from .fsgrp import (FiberedSemiGroup, FsgMorphism, is_rigid, make_fsgrp,
                    validate_fsgrp)
from .reports import Report
from .theory import (AuditUniverse, LocalTheory, check_axioms,
                     constant_sheaf_theory, free_boundary_theory)
from .universe import (enumerate_fsgrps, functor_universe, hand_bimodules,
                       structured_fsgrps, theory_universe)

__all__ = [
    "AuditUniverse", "CobDiffeo", "CobObject", "Cobordism",
    "CylinderFunctor", "EquivariantMorphism", "FiberedBimodule",
    "FiberedSemiGroup", "FinMap", "FinSet", "FsgMorphism",
    "FunctorUniverse", "GluingTriple", "InputError", "LocalTheory",
    "ObjectDiffeo", "Report", "TheoryViolation", "associator",
    "check_axioms", "composition_triple", "constant_sheaf_theory",
    "cylinder", "cylinder_bimodule", "cylinder_semigroup",
    "disjoint_union_cob", "disjoint_union_objects", "enumerate_fsgrps",
    "fiber_product", "free_boundary_theory", "functor_universe", "glue",
    "glue_triple", "hand_bimodules", "hcompose", "hcompose_mor",
    "identity_bimodule", "identity_morphism", "is_rigid",
    "is_rigid_bimodule", "make_fsgrp", "structured_fsgrps",
    "theory_universe", "validate_bimodule", "validate_fsgrp",
    "verify_double_functor",
]
