"""Enumeration and lattice analysis of d-torsion classes for higher Auslander
and higher Nakayama algebras of type A."""

from dtorsion.closure import (
    ModuleSet, Violation, dq_set, dq_single, generate_minimal, is_torsion_class)
from dtorsion.combinatorics import (
    Context, KupischSeries, TupleUniverse, build_universe, leq, loewy_length, module_support,
    squig, tau_d)
from dtorsion.enumeration import (
    BlockDecomposition, ClassCollection, decompose_blocks, enumerate_ainf, enumerate_classes,
    enumerate_incremental, enumerate_paper, restrict)
from dtorsion.homext import ExtensionMiddleTerms, ext_dim, ext_middle_terms, hom_dim
from dtorsion.lattice import (
    TorsionLattice, build_hasse, check_hasse_regular, check_semidistributive, join, meet)

__version__ = "0.1.0"
