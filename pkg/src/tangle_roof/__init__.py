"""Polynomial-invariant entanglement measures and their convex roofs for rank-two mixtures."""

from .errors import DegenerateStateError, QubitCountError, RegionError, StateFileError, TangleError, UnknownCaseError
from .invariants import InvariantKind, concurrence_mixed, concurrence_pure, f_invariant, g_invariant, measure, three_tangle
from .qstate import DensityMatrix, PureState, RankTwoFamily, catalog_lookup, family, mix, partial_trace, superpose
from .roof import CASES, build_decomposition, case_envelope, envelope, reference_formula, verify_decomposition

__version__ = "0.1.0"
