"""n-qubit pure states, density matrices, rank-two families and the named-state catalog.

Qubit ``A`` is the most significant bit of the amplitude index, so for four
qubits index ``0b1000`` is ``|1000>`` = ``|1>_A |0>_B |0>_C |0>_D``.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DegenerateStateError, QubitCountError, RegionError, StateFileError, UnknownCaseError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
ORTHO_TOL = 1e-12
FILE_NORM_TOL = 1e-6


def _frozen(arr):
    arr = np.array(arr, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


def _qubits_for_dim(dim):
    n = int(dim).bit_length() - 1
    if n < 1 or 2**n != dim:
        raise QubitCountError(f"dimension {dim} is not a power of two >= 2")
    return n


@dataclass(frozen=True)
class PureState:
    """Amplitude vector of an n-qubit pure state (not necessarily normalized)."""

    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.shape[0] != 2**self.num_qubits:
            raise QubitCountError(
                f"{self.num_qubits} qubits need {2**self.num_qubits} amplitudes, got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amps):
        amps = np.asarray(amps, dtype=np.complex128).ravel()
        return cls(_qubits_for_dim(amps.shape[0]), amps)

    @classmethod
    def from_kets(cls, terms, num_qubits=None):
        """Build from ``{"0110": amplitude, ...}`` and normalize."""
        labels = list(terms)
        n = num_qubits or len(labels[0])
        amps = np.zeros(2**n, dtype=np.complex128)
        for label, value in terms.items():
            if len(label) != n:
                raise QubitCountError(f"ket label {label!r} does not have {n} qubits")
            amps[int(label, 2)] += value
        return normalize(cls(n, amps))

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def __repr__(self):
        nz = np.flatnonzero(np.abs(self.amplitudes) > 1e-14)
        shown = ", ".join(f"{i:0{self.num_qubits}b}:{self.amplitudes[i]:.6g}" for i in nz[:8])
        more = ", ..." if len(nz) > 8 else ""
        return f"PureState({self.num_qubits}q; {shown}{more})"


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix on ``num_qubits`` qubits."""

    num_qubits: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = _frozen(self.entries)
        dim = 2**self.num_qubits
        if m.shape != (dim, dim):
            raise QubitCountError(f"{self.num_qubits} qubits need a {dim}x{dim} matrix, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise DegenerateStateError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(m) - 1.0) > TRACE_TOL:
            raise DegenerateStateError(f"density matrix trace is {np.trace(m).real:.12g}, not 1")
        try:
            # Cholesky of rho + tol*I exists iff the smallest eigenvalue exceeds -tol
            np.linalg.cholesky(m + PSD_TOL * np.eye(dim))
        except np.linalg.LinAlgError:
            raise DegenerateStateError("density matrix has an eigenvalue below -1e-10") from None
        object.__setattr__(self, "entries", m)

    @classmethod
    def from_entries(cls, m):
        m = np.asarray(m, dtype=np.complex128)
        return cls(_qubits_for_dim(m.shape[0]), m)


@dataclass(frozen=True)
class RankTwoFamily:
    """Ordered orthonormal pair ``(phi, w)`` spanning the support of a rank-two mixture."""

    phi: PureState
    w: PureState

    def __post_init__(self):
        if self.phi.num_qubits != self.w.num_qubits:
            raise QubitCountError("family members have different qubit counts")
        for s in (self.phi, self.w):
            if abs(s.norm - 1.0) > ORTHO_TOL:
                raise DegenerateStateError("family members must be normalized")
        overlap = np.vdot(self.phi.amplitudes, self.w.amplitudes)
        if abs(overlap) > ORTHO_TOL:
            raise DegenerateStateError(f"family members are not orthogonal (overlap {abs(overlap):.3e})")

    @property
    def num_qubits(self):
        return self.phi.num_qubits


@dataclass(frozen=True)
class NamedState:
    key: str
    state: PureState
    description: str


def normalize(s):
    norm = np.linalg.norm(s.amplitudes)
    if norm == 0.0 or not np.isfinite(norm):
        raise DegenerateStateError("cannot normalize a zero-norm state")
    return PureState(s.num_qubits, s.amplitudes / norm)


def _check_p(p):
    if not 0.0 <= p <= 1.0:
        raise RegionError(f"mixing weight p={p} outside [0, 1]")


def superpose(fam, p, phase):
    """``sqrt(p)|phi> - exp(i*phase) sqrt(1-p)|w>``."""
    _check_p(p)
    amps = np.sqrt(p) * fam.phi.amplitudes - np.exp(1j * phase) * np.sqrt(1.0 - p) * fam.w.amplitudes
    return PureState(fam.num_qubits, amps)


def density_of(s):
    a = s.amplitudes
    return DensityMatrix(s.num_qubits, np.outer(a, a.conj()))


def mix(fam, p):
    _check_p(p)
    a, b = fam.phi.amplitudes, fam.w.amplitudes
    return DensityMatrix(fam.num_qubits, p * np.outer(a, a.conj()) + (1.0 - p) * np.outer(b, b.conj()))


def partial_trace(rho, keep):
    """Marginal on the qubits in ``keep``, ordered as given (0 = qubit A)."""
    n = rho.num_qubits
    keep = [int(k) for k in keep]
    if not keep or len(set(keep)) != len(keep) or any(not 0 <= k < n for k in keep):
        raise QubitCountError(f"invalid qubit selection {keep} for {n} qubits")
    traced = [q for q in range(n) if q not in keep]
    t = rho.entries.reshape([2] * (2 * n))
    # move kept row axes, then kept column axes, to the front; contract the rest pairwise
    order = keep + [n + k for k in keep] + traced + [n + q for q in traced]
    t = t.transpose(order)
    d_keep, d_tr = 2 ** len(keep), 2 ** len(traced)
    t = t.reshape(d_keep, d_keep, d_tr, d_tr)
    out = np.trace(t, axis1=2, axis2=3)
    return DensityMatrix(len(keep), 0.5 * (out + out.conj().T))


def _catalog():
    r2 = np.sqrt(2.0)
    entries = [
        ("phi1", {"0000": 1, "1111": 1}, "maximally entangled four-qubit state (|0000>+|1111>)/sqrt2"),
        ("phi2", {"1111": r2, "1000": 1, "0100": 1, "0010": 1, "0001": 1},
         "maximally entangled four-qubit state (sqrt2|1111>+|1000>+|0100>+|0010>+|0001>)/sqrt6"),
        ("phi3", {"1111": 1, "1100": 1, "0010": 1, "0001": 1},
         "maximally entangled four-qubit state (|1111>+|1100>+|0010>+|0001>)/2"),
        ("w4", {"0111": 1, "1011": 1, "1101": 1, "1110": 1}, "four-qubit W state; class L_ab3"),
        ("ghz3", {"000": 1, "111": 1}, "three-qubit GHZ state"),
        ("w3", {"001": 1, "010": 1, "100": 1}, "three-qubit W state"),
        ("xi", {"0000": 1, "1011": 1, "1101": 1, "1110": 1}, "representative of class L_7+1bar"),
        ("eta", {"0001": 1, "0110": 1, "1000": 1}, "representative of class L_a4"),
        # remaining SLOCC class representatives, keyed by class label
        ("l_abc2", {"0000": 1}, "class L_abc2 (fully separable representative)"),
        ("l_a2b2", {"0110": 1, "0011": 1}, "class L_a2b2"),
        ("l_a2_0_3p1", {"0011": 1, "0101": 1, "0110": 1}, "class L_a2 0_(3+1bar)"),
        ("l_0_3p1_0_3p1", {"0000": 1, "0111": 1}, "class L_0_(3+1bar) 0_(3+1bar)"),
        ("l_7p1", {"0000": 1, "1011": 1, "1101": 1, "1110": 1}, "class L_7+1bar (same state as xi)"),
        ("l_a4", {"0001": 1, "0110": 1, "1000": 1}, "class L_a4 (same state as eta)"),
        ("l_5p3", {"0000": 1, "0101": 1, "1000": 1, "1110": 1}, "class L_5+3bar"),
    ]
    return {key: NamedState(key, PureState.from_kets(kets), desc) for key, kets, desc in entries}


CATALOG = _catalog()

# SLOCC class label -> catalog keys of its representatives
SLOCC_CLASSES = {
    "G_abcd": ("phi1", "phi2", "phi3"),
    "L_ab3": ("w4",),
    "L_abc2": ("l_abc2",),
    "L_a2b2": ("l_a2b2",),
    "L_a2_0_3+1": ("l_a2_0_3p1",),
    "L_0_3+1_0_3+1": ("l_0_3p1_0_3p1",),
    "L_7+1": ("l_7p1",),
    "L_a4": ("l_a4",),
    "L_5+3": ("l_5p3",),
}


def catalog_lookup(key):
    try:
        return CATALOG[key.lower()]
    except KeyError:
        raise UnknownCaseError(f"unknown state {key!r}; known: {', '.join(sorted(CATALOG))}") from None


def family(phi_key, w_key):
    return RankTwoFamily(catalog_lookup(phi_key).state, catalog_lookup(w_key).state)


def read_state(path, allow_unnormalized=False):
    """Parse a ``QSTATE`` text file; see ``write_state`` for the layout."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    return parse_state(text, allow_unnormalized=allow_unnormalized)


def parse_state(text, allow_unnormalized=False):
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise StateFileError("empty state file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "QSTATE":
        raise StateFileError(f"bad header {lines[0]!r}; expected 'QSTATE <num_qubits>'")
    try:
        n = int(header[1])
    except ValueError:
        raise StateFileError(f"bad qubit count {header[1]!r}") from None
    if n < 1:
        raise StateFileError(f"qubit count must be positive, got {n}")
    body = lines[1:]
    if len(body) != 2**n:
        raise StateFileError(f"expected {2**n} amplitude lines, got {len(body)}")
    amps = np.zeros(2**n, dtype=np.complex128)
    for expected, line in enumerate(body):
        parts = line.split()
        if len(parts) != 3:
            raise StateFileError(f"bad amplitude line {line!r}")
        try:
            idx, re, im = int(parts[0]), float(parts[1]), float(parts[2])
        except ValueError:
            raise StateFileError(f"bad amplitude line {line!r}") from None
        if idx != expected:
            raise StateFileError(f"indices must ascend from 0; got {idx} where {expected} expected")
        amps[idx] = complex(re, im)
    if not np.all(np.isfinite(amps)):
        raise StateFileError("non-finite amplitude")
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise StateFileError("state has zero norm")
    if abs(norm - 1.0) > FILE_NORM_TOL and not allow_unnormalized:
        raise StateFileError(f"state norm {norm:.9g} deviates from 1 by more than {FILE_NORM_TOL}")
    return PureState(n, amps / norm)


def format_state(s):
    out = [f"QSTATE {s.num_qubits}"]
    for i, a in enumerate(s.amplitudes):
        out.append(f"{i} {a.real:.17g} {a.imag:.17g}")
    return "\n".join(out) + "\n"


def write_state(s, path):
    Path(path).write_text(format_state(s), encoding="utf-8", newline="\n")
