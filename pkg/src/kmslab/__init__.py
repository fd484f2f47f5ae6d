"""Numerical laboratory for KMS-symmetric energy forms and Markovian semigroups.

Builds, at finite truncation, the standard-form objects of a Gibbs state
on the matrix algebra (modular operator powers, conjugation, symmetric
embedding), the two-sided derivations and their energy forms, the
generators assembled two independent ways, their spectrally exponentiated
semigroups, oscillatory-average deformations of the ladder operators, and
the abelian multiplication semigroups - and certifies every
finite-checkable claim with machine-readable reports.
"""

__version__ = "0.1.0"

from .fock import AffiliatedOperator, FockSpec, GibbsData, HamiltonianProfile, gibbs_data, ladder, ladder_power
from .standard_form import StandardFormContext, hs_inner, hs_norm
from .dirichlet import DirichletGenerator, SuperOperator
from .semigroup import SemigroupHandle, Spectrum
from .deformation import FunctionSpec, QuadratureSpec
from .abelian import AtomicSpace, threshold_t0
from .reporting import Report

__all__ = [
    "AffiliatedOperator",
    "AtomicSpace",
    "DirichletGenerator",
    "FockSpec",
    "FunctionSpec",
    "GibbsData",
    "HamiltonianProfile",
    "QuadratureSpec",
    "Report",
    "SemigroupHandle",
    "Spectrum",
    "StandardFormContext",
    "SuperOperator",
    "gibbs_data",
    "hs_inner",
    "hs_norm",
    "ladder",
    "ladder_power",
    "threshold_t0",
]
