"""SLOCC-invariant entanglement monotones of pure states, plus two-qubit mixed concurrence.

Every measure here is a polynomial in a *bilinear covariant* of the amplitude
vector: the four-qubit measures use the expectation values
``psi^T (s_a x s_b x s_c x s_d) psi`` (no complex conjugation), the three-tangle
uses the 2x2 matrix obtained by contracting two copies of ``psi`` over qubits A
and B with epsilon tensors, and the pure concurrence uses a scalar epsilon
contraction. Keeping the covariant separate lets ``roof`` evaluate whole
characteristic-curve grids by expanding it bilinearly in the two family members.
"""

import enum

import numpy as np

from .errors import DegenerateStateError, QubitCountError, RegionError
from .jacobi import drop_dust, hermitian_eig, psd_sqrt

SIGMA = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
METRIC = (-1.0, 1.0, 0.0, 1.0)
EPSILON = np.array([[0.0, 1.0], [-1.0, 0.0]])

# index 2 carries metric weight 0, so contracted indices only run over these
CONTRACTED = (0, 1, 3)
_G = np.array([METRIC[i] for i in CONTRACTED])

ZERO_ULPS = 64

# qubit pairs carrying the contracted sigmas; every other slot holds sigma_y
SLOT_PAIRS = ((0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (0, 3))
AB, AC, BC, BD, CD, AD = range(6)


class InvariantKind(enum.Enum):
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"
    TAU3 = "tau3"
    TAU3_SQUARED = "tau3sq"
    CONCURRENCE = "C"

    @property
    def num_qubits(self):
        if self in (InvariantKind.TAU3, InvariantKind.TAU3_SQUARED):
            return 3
        if self is InvariantKind.CONCURRENCE:
            return 2
        return 4

    @property
    def degree(self):
        """Polynomial degree in the amplitudes before any root is taken."""
        return {"F1": 6, "F2": 8, "F3": 12, "G1": 6, "G2": 8, "G3": 12,
                "tau3": 4, "tau3sq": 4, "C": 2}[self.value]

    @property
    def root(self):
        """Exponent turning the polynomial into the reported value (1 for the F's)."""
        return {"G1": 1 / 3, "G2": 1 / 4, "G3": 1 / 6, "tau3": 1 / 2}.get(self.value, 1.0)

    @property
    def base(self):
        """The F-kind a G-kind is the root of (identity otherwise)."""
        return {"G1": InvariantKind.F1, "G2": InvariantKind.F2, "G3": InvariantKind.F3,
                "tau3": InvariantKind.TAU3_SQUARED}.get(self.value, self)

    @classmethod
    def parse(cls, text):
        key = text.strip()
        for kind in cls:
            if key in (kind.value, kind.name) or key.lower() == kind.value.lower():
                return kind
        raise ValueError(f"unknown invariant kind {text!r}")


def pauli_string(indices):
    """Monomial form of ``s_i1 x s_i2 x ...``: ``M[x, perm[x]] == coeff[x]``, all else 0."""
    n = len(indices)
    dim = 2**n
    perm = np.zeros(dim, dtype=np.intp)
    coeff = np.ones(dim, dtype=np.complex128)
    for x in range(dim):
        y = 0
        for q, mu in enumerate(indices):
            bit = (x >> (n - 1 - q)) & 1
            row = SIGMA[mu][bit]
            col = int(np.flatnonzero(row)[0])
            coeff[x] *= row[col]
            y |= col << (n - 1 - q)
        perm[x] = y
    return perm, coeff


def _slot_indices(pair, mu, nu):
    idx = [2, 2, 2, 2]
    idx[pair[0]], idx[pair[1]] = mu, nu
    return tuple(idx)


def _build_slot_tables():
    perms = np.zeros((6, 3, 3, 16), dtype=np.intp)
    coeffs = np.zeros((6, 3, 3, 16), dtype=np.complex128)
    for s, pair in enumerate(SLOT_PAIRS):
        for i, mu in enumerate(CONTRACTED):
            for j, nu in enumerate(CONTRACTED):
                perms[s, i, j], coeffs[s, i, j] = pauli_string(_slot_indices(pair, mu, nu))
    return perms, coeffs


_SLOT_PERMS, _SLOT_COEFFS = _build_slot_tables()


def _amps(s, n):
    if s.num_qubits != n:
        raise QubitCountError(f"measure needs {n} qubits, state has {s.num_qubits}")
    return s.amplitudes


def antilinear_form(s, a, b, c, d):
    """``sum_xy s_x s_y (s_a x s_b x s_c x s_d)_xy`` for a four-qubit state."""
    amps = _amps(s, 4)
    for mu in (a, b, c, d):
        if mu not in (0, 1, 2, 3):
            raise ValueError(f"sigma index {mu} outside 0..3")
    perm, coeff = pauli_string((a, b, c, d))
    return complex(np.sum(amps * coeff * amps[perm]))


# -- bilinear covariants -------------------------------------------------------------

def four_qubit_covariant(u, v=None):
    """Slot matrices ``T[..., s, i, j]`` = bilinear form of u, v with the contracted
    sigmas at qubit pair ``SLOT_PAIRS[s]`` and sigma_y elsewhere. Shape ``(..., 6, 3, 3)``."""
    u = np.asarray(u, dtype=np.complex128)
    v = u if v is None else np.asarray(v, dtype=np.complex128)
    # gather v over every monomial permutation: (..., 6, 3, 3, 16)
    v_perm = v[..., _SLOT_PERMS]
    return np.einsum("...x,sijx,...sijx->...sij", u, _SLOT_COEFFS, v_perm)


def three_qubit_covariant(u, v=None):
    """``B[k1, k2] = eps_{i1 i2} eps_{j1 j2} u_{i1 j1 k1} v_{i2 j2 k2}``, shape ``(..., 2, 2)``."""
    u = np.asarray(u, dtype=np.complex128)
    v = u if v is None else np.asarray(v, dtype=np.complex128)
    tu = u.reshape(u.shape[:-1] + (2, 2, 2))
    tv = v.reshape(v.shape[:-1] + (2, 2, 2))
    return np.einsum("ab,cd,...ack,...bdl->...kl", EPSILON, EPSILON, tu, tv)


def two_qubit_covariant(u, v=None):
    u = np.asarray(u, dtype=np.complex128)
    v = u if v is None else np.asarray(v, dtype=np.complex128)
    tu = u.reshape(u.shape[:-1] + (2, 2))
    tv = v.reshape(v.shape[:-1] + (2, 2))
    return np.einsum("ab,cd,...ac,...bd->...", EPSILON, EPSILON, tu, tv)


COVARIANTS = {4: four_qubit_covariant, 3: three_qubit_covariant, 2: two_qubit_covariant}


def _gmat(a, b, g=_G):
    """``sum_k a_ik g_k b_jk`` batched over leading axes."""
    return np.matmul(a * g, np.swapaxes(b, -1, -2))


def _snap(x, bound):
    """Zero out values within ``ZERO_ULPS`` roundoff units of the size of their terms."""
    return np.where(np.abs(x) <= ZERO_ULPS * np.finfo(float).eps * bound, 0.0, x)


def contraction(kind, cov, snap=True):
    """Complex value of the measure's polynomial before the modulus (and any root).

    ``kind`` may be any kind; G-kinds and tau3 share the polynomial of their base.
    With ``snap`` each sum is compared against the same sum taken over absolute
    values, and cancellation residue is set to exactly zero. Without it the
    roots in G1..G3 would lift 1e-17 residue to 1e-5.
    """
    kind = kind.base
    gg = np.outer(_G, _G)
    cov_abs = np.abs(cov) if snap else None
    if kind is InvariantKind.F1:
        # sum g_mu g_nu g_lam T_AB[mu,nu] T_AC[mu,lam] T_BC[nu,lam]
        x = np.sum(gg * cov[..., AB, :, :] * _gmat(cov[..., AC, :, :], cov[..., BC, :, :]), axis=(-2, -1))
        if snap:
            g1 = np.abs(_G)
            m = _gmat(cov_abs[..., AC, :, :], cov_abs[..., BC, :, :], g1)
            x = _snap(x, np.sum(cov_abs[..., AB, :, :] * m, axis=(-2, -1)))
        return x
    if kind is InvariantKind.F2:
        # sum g^4 T_AB[mu,nu] T_AC[mu,lam] T_BD[nu,tau] T_CD[lam,tau]
        n = _gmat(cov[..., BD, :, :], cov[..., CD, :, :])  # [nu, lam]
        m = _gmat(cov[..., AC, :, :], n)  # [mu, nu]
        x = np.sum(gg * cov[..., AB, :, :] * m, axis=(-2, -1))
        if snap:
            g1 = np.abs(_G)
            n = _gmat(cov_abs[..., BD, :, :], cov_abs[..., CD, :, :], g1)
            m = _gmat(cov_abs[..., AC, :, :], n, g1)
            x = _snap(x, np.sum(cov_abs[..., AB, :, :] * m, axis=(-2, -1)))
        return x
    if kind is InvariantKind.F3:
        # product of three metric "squares"; each factor is checked on its own
        sq = np.sum(gg * cov[..., [AB, AC, AD], :, :] ** 2, axis=(-2, -1))
        if snap:
            sq = _snap(sq, np.sum(cov_abs[..., [AB, AC, AD], :, :] ** 2, axis=(-2, -1)))
        return 0.5 * sq[..., 0] * sq[..., 1] * sq[..., 2]
    if kind is InvariantKind.TAU3_SQUARED:
        # 2 eps_{k1k3} eps_{k2k4} B_{k1k2} B_{k3k4} = 4 (B00 B11 - B01 B10)
        x = 4.0 * (cov[..., 0, 0] * cov[..., 1, 1] - cov[..., 0, 1] * cov[..., 1, 0])
        if snap:
            x = _snap(x, 4.0 * (cov_abs[..., 0, 0] * cov_abs[..., 1, 1] + cov_abs[..., 0, 1] * cov_abs[..., 1, 0]))
        return x
    if kind is InvariantKind.CONCURRENCE:
        return cov
    raise ValueError(f"no polynomial for {kind}")


def value_from_contraction(kind, x):
    """Map the complex contraction to the reported measure (modulus, then root)."""
    val = np.abs(x)
    if kind.root != 1.0:
        val = val ** kind.root
    return val


def measure_values(kind, amps):
    """Vectorized measure over amplitude arrays of shape ``(..., 2**n)``."""
    amps = np.asarray(amps, dtype=np.complex128)
    n = kind.num_qubits
    if amps.shape[-1] != 2**n:
        raise QubitCountError(f"{kind.value} needs {n}-qubit amplitudes, got length {amps.shape[-1]}")
    return value_from_contraction(kind, contraction(kind, COVARIANTS[n](amps)))


def measure(kind, s):
    """Value of ``kind`` on pure state ``s``."""
    if isinstance(kind, str):
        kind = InvariantKind.parse(kind)
    _amps(s, kind.num_qubits)
    return float(measure_values(kind, s.amplitudes))


def f_invariant(kind, s):
    kind = InvariantKind.parse(kind) if isinstance(kind, str) else kind
    if kind not in (InvariantKind.F1, InvariantKind.F2, InvariantKind.F3):
        raise ValueError(f"{kind} is not an F-invariant")
    return measure(kind, s)


def g_invariant(kind, s):
    kind = InvariantKind.parse(kind) if isinstance(kind, str) else kind
    if kind not in (InvariantKind.G1, InvariantKind.G2, InvariantKind.G3):
        raise ValueError(f"{kind} is not a G-invariant")
    return measure(kind, s)


def three_tangle(s, squared=False):
    return measure(InvariantKind.TAU3_SQUARED if squared else InvariantKind.TAU3, s)


def concurrence_pure(s):
    a = _amps(s, 2)
    return float(2.0 * abs(a[0] * a[3] - a[1] * a[2]))


_YY = np.kron(SIGMA[2], SIGMA[2])


def concurrence_mixed(rho):
    """Wootters concurrence of a two-qubit density matrix.

    Uses the Hermitian form: the lambda_i are square roots of the eigenvalues of
    ``sqrt(rho) rho~ sqrt(rho)``, which equal those of ``rho rho~``.
    """
    if rho.num_qubits != 2:
        raise QubitCountError(f"concurrence needs 2 qubits, got {rho.num_qubits}")
    m = rho.entries
    try:
        root = psd_sqrt(m)
    except ValueError as exc:
        raise DegenerateStateError(str(exc)) from exc
    flipped = _YY @ m.conj() @ _YY
    h = root @ flipped @ root
    w, _ = hermitian_eig(0.5 * (h + h.conj().T))
    lam = np.sqrt(drop_dust(w))
    return float(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0))


def binary_entropy(x, base=None):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -np.where(x > 0, x * np.log(x), 0.0) - np.where(x < 1, (1 - x) * np.log1p(-x), 0.0)
    if base is not None:
        h = h / np.log(base)
    return h


def eof_from_concurrence(c, base=None):
    """Two-qubit entanglement of formation; natural log unless ``base`` is given."""
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise RegionError(f"concurrence {c} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    return float(binary_entropy((1.0 + np.sqrt(1.0 - c * c)) / 2.0, base=base))


def all_four_qubit(s):
    """Dict of F1..F3, G1..G3 for one state, sharing a single covariant evaluation."""
    cov = four_qubit_covariant(_amps(s, 4))
    out = {}
    for kind in (InvariantKind.F1, InvariantKind.F2, InvariantKind.F3,
                 InvariantKind.G1, InvariantKind.G2, InvariantKind.G3):
        out[kind.value] = float(value_from_contraction(kind, contraction(kind, cov)))
    return out


def random_sl2(rng):
    """Random 2x2 complex matrix with determinant exactly 1 (up to rounding)."""
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return m / np.sqrt(np.linalg.det(m))


def apply_local(ops, s):
    """Apply the tensor product of single-qubit operators to ``s``."""
    full = ops[0]
    for op in ops[1:]:
        full = np.kron(full, op)
    return type(s)(s.num_qubits, full @ s.amplitudes)

