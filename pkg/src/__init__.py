"""
cliffverify
Exact reconstruction and verification of the Spin(9)/Spin(10) Clifford
systems, their Kähler-form tables and the canonical 8-forms.
"""

__version__ = "1.0.0"
__author__ = "BHD"
__email__ = "buihongduc132@yahoo.com"

from .config import get_config, save_config, CliffverifyConfig, GoldenConfig, ComputeConfig, LoggingConfig
from .algebra_core import GaussianRational, ExactMatrix, realify, rank_of_family, solve_in_span
from .octonion import Octonion, oct_mul, right_mult_matrix
from .clifford_systems import CliffordSystem, build_spin9_system, build_C9_system, build_pauli_system
from .spin_algebras import LieBasis, build_JC, build_JD, build_P_basis
from .exterior_forms import SparseForm, FormMatrix, ComplexBladeView, wedge, tau2, tau4, omega
from .paper_catalog import GoldenFormatError, GOLDEN_TABLES, verify_tables
from .reports import IdentityReport, VerificationReport, BenchResult

__all__ = [
    "get_config",
    "save_config",
    "CliffverifyConfig",
    "GoldenConfig",
    "ComputeConfig",
    "LoggingConfig",
    "GaussianRational",
    "ExactMatrix",
    "realify",
    "rank_of_family",
    "solve_in_span",
    "Octonion",
    "oct_mul",
    "right_mult_matrix",
    "CliffordSystem",
    "build_spin9_system",
    "build_C9_system",
    "build_pauli_system",
    "LieBasis",
    "build_JC",
    "build_JD",
    "build_P_basis",
    "SparseForm",
    "FormMatrix",
    "ComplexBladeView",
    "wedge",
    "tau2",
    "tau4",
    "omega",
    "GoldenFormatError",
    "GOLDEN_TABLES",
    "verify_tables",
    "IdentityReport",
    "VerificationReport",
    "BenchResult",
]
