"""Bloch-ball picture of the two-dimensional span {|Phi_2>, |W_4>}.

``|Phi_2>`` is the north pole and ``|W_4>`` the south pole. The states
``Z_2(p0, 2 pi k / 3)`` at the nontrivial zero p0 of F1 sit on a circle of
latitude; together with the south pole they span a tetrahedron whose every
point has a decomposition into zero-F1 pure states.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError, RegionError
from .invariants import SIGMA
from .qstate import DensityMatrix, RankTwoFamily, family, superpose
from .roof import P0_F1_RHO2, Decomposition, flatten_terms

SPAN_TOL = 1e-8
BLOCH_TOL = 1e-10
INSIDE_TOL = 1e-10


@dataclass(frozen=True)
class BlochVector:
    r: np.ndarray

    def __post_init__(self):
        r = np.array(self.r, dtype=float).reshape(3)
        if np.linalg.norm(r) > 1.0 + BLOCH_TOL:
            raise RegionError(f"Bloch vector {r} has length {np.linalg.norm(r):.12g} > 1")
        r.setflags(write=False)
        object.__setattr__(self, "r", r)

    @property
    def is_pure(self):
        return abs(np.linalg.norm(self.r) - 1.0) <= BLOCH_TOL


def default_span():
    return family("phi2", "w4")


def _basis(span):
    return np.column_stack([span.phi.amplitudes, span.w.amplitudes])


def bloch_from_span_state(rho, span=None):
    """Bloch vector of a density matrix supported on ``span`` (default Phi_2, W_4)."""
    span = span or default_span()
    e = _basis(span)
    m = rho.entries
    proj = e @ e.conj().T
    leak = np.max(np.abs(m - proj @ m @ proj))
    if leak > SPAN_TOL:
        raise DegenerateStateError(f"state leaks out of the span (max entry {leak:.3e})")
    small = e.conj().T @ m @ e
    r = [np.trace(small @ SIGMA[k]).real for k in (1, 2, 3)]
    return BlochVector(np.array(r))


def density_from_bloch(r, span=None):
    """``E (1 + r.sigma)/2 E^dagger`` with ``E`` the span basis."""
    span = span or default_span()
    r = r.r if isinstance(r, BlochVector) else np.asarray(r, dtype=float)
    small = 0.5 * (SIGMA[0] + r[0] * SIGMA[1] + r[1] * SIGMA[2] + r[2] * SIGMA[3])
    e = _basis(span)
    return DensityMatrix(span.num_qubits, e @ small @ e.conj().T)


@dataclass(frozen=True)
class Tetrahedron:
    vertices: tuple
    states: tuple = ()

    def __post_init__(self):
        if len(self.vertices) != 4:
            raise ValueError("a tetrahedron needs four vertices")
        if self.volume <= 1e-9:
            raise DegenerateStateError(f"degenerate tetrahedron (volume {self.volume:.3e})")

    @property
    def points(self):
        return np.array([v.r for v in self.vertices])

    @property
    def volume(self):
        v = self.points
        return abs(np.linalg.det(v[1:] - v[0])) / 6.0

    def barycentric(self, r):
        r = r.r if isinstance(r, BlochVector) else np.asarray(r, dtype=float)
        a = np.vstack([self.points.T, np.ones(4)])
        return np.linalg.solve(a, np.append(r, 1.0))


def zero_tetrahedron(p0=P0_F1_RHO2):
    """South pole plus the three phase-``2 pi k / 3`` states at the F1 zero of rho_2."""
    s = np.sqrt(p0 * (1.0 - p0))
    z = 2.0 * p0 - 1.0
    pts = [(0.0, 0.0, -1.0), (-2.0 * s, 0.0, z), (s, -np.sqrt(3.0) * s, z), (s, np.sqrt(3.0) * s, z)]
    span = default_span()
    states = (span.w,) + tuple(superpose(span, p0, 2.0 * np.pi * k / 3.0) for k in range(3))
    return Tetrahedron(tuple(BlochVector(np.array(p)) for p in pts), states)


def contains(t, r, tol=INSIDE_TOL):
    """Inside-or-on-boundary test: every barycentric coordinate (a scaled
    signed distance to the opposite face) must be >= -tol."""
    return bool(np.all(t.barycentric(r) >= -tol))


def zero_witness(r, t=None, span=None):
    """Decomposition of the span state at ``r`` into the tetrahedron's vertex states."""
    t = t or zero_tetrahedron()
    span = span or default_span()
    if not isinstance(span, RankTwoFamily):
        raise TypeError("span must be a RankTwoFamily")
    lam = t.barycentric(r)
    if np.any(lam < -INSIDE_TOL):
        raise RegionError(f"point {np.asarray(getattr(r, 'r', r))} lies outside the tetrahedron")
    lam = np.clip(lam, 0.0, None)
    lam = lam / lam.sum()
    terms = flatten_terms(list(zip(lam, t.states)))
    return Decomposition(tuple(terms), density_from_bloch(r, span))
