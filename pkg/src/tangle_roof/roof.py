"""Convex roofs of rank-two mixtures from characteristic curves.

For a family ``(phi, w)`` the characteristic curves are the measure evaluated
on ``Z(p, a) = sqrt(p)|phi> - exp(i a) sqrt(1-p)|w>``. The roof of
``p|phi><phi| + (1-p)|w><w|`` is the lower convex envelope over ``p`` of the
pointwise phase-minimum of those curves. This module samples the curves,
builds the envelope, and carries the closed-form piecewise results and the
explicit optimal decompositions they come from, so each can be checked against
the others.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect, brentq

from .errors import QubitCountError, RegionError, UnknownCaseError
from .invariants import (
    COVARIANTS,
    InvariantKind,
    contraction,
    measure,
    value_from_contraction,
)
from .qstate import DensityMatrix, density_of, family, mix, superpose

DEFAULT_P_POINTS = 2001
DEFAULT_PHI_POINTS = 720
THREADS_ENV = "TANGLE_ROOF_THREADS"

# nontrivial zeros of the phase-0 characteristic curves
SQRT3 = math.sqrt(3.0)
TWO_SQRT6 = 2.0 * math.sqrt(6.0)
P0_F1_RHO1 = SQRT3 / (SQRT3 + 1.0)
P0_F2_RHO1 = 2.0 / 3.0
P0_F1_RHO2 = TWO_SQRT6 ** (2.0 / 3.0) / (1.0 + TWO_SQRT6 ** (2.0 / 3.0))
P0_F3_RHO3 = 3.0 / 5.0
P0_GHZW = 4.0 * 2.0 ** (1.0 / 3.0) / (3.0 + 4.0 * 2.0 ** (1.0 / 3.0))
P1_GHZW = 0.5 + 3.0 * math.sqrt(465.0) / 310.0
# inflection point of g_I for rho_2; upper end of the p1 bracket
P_STAR_RHO2 = 0.9196


def p1_equation(p):
    """Residual of ``6p(4p-3)^2 = (1-p)(1+2p)^2``; its root is the tangent point for F1(rho_2)."""
    return 6.0 * p * (4.0 * p - 3.0) ** 2 - (1.0 - p) * (1.0 + 2.0 * p) ** 2


def solve_p1():
    return bisect(p1_equation, P0_F1_RHO2, P_STAR_RHO2, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)


def step(x):
    """Heaviside step with step(0) = 1."""
    return np.where(np.asarray(x) >= 0.0, 1.0, 0.0)


# -- closed forms ---------------------------------------------------------------------

def g1_rho2(p):
    p = np.asarray(p, dtype=float)
    return 8.0 / 9.0 * p**1.5 * (p**1.5 - TWO_SQRT6 * (1.0 - p) ** 1.5)


def g2_rho2(p, p1=None):
    p1 = solve_p1() if p1 is None else p1
    p = np.asarray(p, dtype=float)
    inner = p1**3 - TWO_SQRT6 * p1**1.5 * (1.0 - p1) ** 1.5
    return 8.0 / 9.0 * ((p - p1) / (1.0 - p1) + (1.0 - p) / (1.0 - p1) * inner)


def g1_ghzw(p):
    p = np.asarray(p, dtype=float)
    return p**2 - 8.0 * math.sqrt(6.0) / 9.0 * np.sqrt(p * (1.0 - p) ** 3)


def g2_ghzw(p):
    p = np.asarray(p, dtype=float)
    return 1.0 - (1.0 - p) * (1.5 + math.sqrt(465.0) / 18.0)


def _ramp(p0, top=1.0):
    def f(p):
        p = np.asarray(p, dtype=float)
        return step(p - p0) * top * (p - p0) / (1.0 - p0)
    return f


def _piecewise3(p0, p1, mid, high):
    def f(p):
        p = np.asarray(p, dtype=float)
        return np.where(p < p0, 0.0, np.where(p <= p1, mid(p), high(p)))
    return f


@dataclass(frozen=True)
class PiecewiseFormula:
    case: str
    breakpoints: tuple
    evaluator: object = field(repr=False)

    def __call__(self, p):
        out = self.evaluator(np.asarray(p, dtype=float))
        return float(out) if np.ndim(out) == 0 else out


# -- case registry ---------------------------------------------------------------------

@dataclass(frozen=True)
class RoofCase:
    """One (measure, mixture) pair.

    ``scheme`` names the shape of the optimal decompositions:
    ``threshold``  zero up to p0, then the equal-weight phase mixture at p;
    ``ramp``       zero up to p0, then |phi> mixed with the phase mixture at p0;
    ``tangent``    threshold up to p1, then |phi> mixed with the phase mixture at p1;
    ``flat``       the phase mixture at p over the whole range;
    ``zero``       the spectral decomposition itself.
    """

    id: str
    phi_key: str
    w_key: str
    kind: InvariantKind
    scheme: str
    phases: int = 1
    p0: float = None

    @property
    def family(self):
        return family(self.phi_key, self.w_key)

    @property
    def p1(self):
        if self.scheme != "tangent":
            return None
        return P1_GHZW if self.phi_key == "ghz3" else solve_p1()


K = InvariantKind
_CASES = [
    RoofCase("F1-rho1", "phi1", "w4", K.F1, "threshold", 4, P0_F1_RHO1),
    RoofCase("F2-rho1", "phi1", "w4", K.F2, "threshold", 4, P0_F2_RHO1),
    RoofCase("F3-rho1", "phi1", "w4", K.F3, "flat", 2),
    RoofCase("G1-rho1", "phi1", "w4", K.G1, "ramp", 4, P0_F1_RHO1),
    RoofCase("G2-rho1", "phi1", "w4", K.G2, "ramp", 4, P0_F2_RHO1),
    RoofCase("G3-rho1", "phi1", "w4", K.G3, "flat", 2),
    RoofCase("F1-rho2", "phi2", "w4", K.F1, "tangent", 3, P0_F1_RHO2),
    RoofCase("G1-rho2", "phi2", "w4", K.G1, "ramp", 3, P0_F1_RHO2),
    RoofCase("F3-rho3", "phi3", "w4", K.F3, "threshold", 2, P0_F3_RHO3),
    RoofCase("G3-rho3", "phi3", "w4", K.G3, "ramp", 2, P0_F3_RHO3),
    RoofCase("tau3sq-ghzw", "ghz3", "w3", K.TAU3_SQUARED, "tangent", 3, P0_GHZW),
    RoofCase("tau3-ghzw", "ghz3", "w3", K.TAU3, "ramp", 3, P0_GHZW),
]
_CASES += [RoofCase(f"{k.value}-rho2", "phi2", "w4", k, "zero") for k in (K.F2, K.F3, K.G2, K.G3)]
_CASES += [RoofCase(f"{k.value}-rho3", "phi3", "w4", k, "zero") for k in (K.F1, K.F2, K.G1, K.G2)]
CASES = {c.id: c for c in _CASES}
_CASES_LOWER = {k.lower(): c for k, c in CASES.items()}
ZERO_CASES = tuple(c.id for c in _CASES if c.scheme == "zero")


def get_case(case_id):
    if isinstance(case_id, RoofCase):
        return case_id
    try:
        return CASES[case_id] if case_id in CASES else _CASES_LOWER[case_id.lower()]
    except (KeyError, AttributeError):
        raise UnknownCaseError(f"unknown case {case_id!r}; supported: {', '.join(CASES)}") from None


def reference_formula(case_id):
    """Closed-form roof value for a supported case, as a function of p."""
    case = get_case(case_id)
    cid = case.id
    p0 = case.p0
    if case.scheme == "zero":
        return PiecewiseFormula(cid, (), lambda p: np.zeros_like(p, dtype=float))
    if cid == "F1-rho1":
        f = lambda p: step(p - p0) * p * (6.0 * p - 2.0 * p**2 - 3.0)
    elif cid == "F2-rho1":
        f = lambda p: step(p - p0) * p**2 * (p**2 - 4.0 * (1.0 - p) ** 2)
    elif cid == "F3-rho1":
        f = lambda p: p**6 / 2.0
    elif cid in ("G1-rho1", "G2-rho1", "G3-rho3", "tau3-ghzw"):
        f = _ramp(p0)
    elif cid == "G3-rho1":
        f = lambda p: p / 2.0 ** (1.0 / 6.0)
    elif cid == "G1-rho2":
        f = _ramp(p0, (8.0 / 9.0) ** (1.0 / 3.0))
    elif cid == "F1-rho2":
        p1 = case.p1
        f = _piecewise3(p0, p1, g1_rho2, lambda p: g2_rho2(p, p1))
        return PiecewiseFormula(cid, (p0, p1), f)
    elif cid == "F3-rho3":
        f = lambda p: step(p - p0) * 2.5 * p**5 * (p - 0.6)
    elif cid == "tau3sq-ghzw":
        f = _piecewise3(p0, P1_GHZW, g1_ghzw, g2_ghzw)
        return PiecewiseFormula(cid, (p0, P1_GHZW), f)
    else:  # pragma: no cover - registry and formulas are kept in sync
        raise UnknownCaseError(cid)
    return PiecewiseFormula(cid, () if p0 is None else (p0,), f)


# -- characteristic curves ---------------------------------------------------------------

@dataclass(frozen=True)
class CurveGrid:
    p_values: np.ndarray
    phi_values: np.ndarray
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.samples.shape != (len(self.p_values), len(self.phi_values)):
            raise ValueError("sample matrix does not match the grids")
        if not np.all(np.isfinite(self.samples)) or np.any(self.samples < 0):
            raise ValueError("samples must be finite and non-negative")


def p_grid(n=DEFAULT_P_POINTS):
    return np.linspace(0.0, 1.0, n)


def phi_grid(n=DEFAULT_PHI_POINTS):
    return 2.0 * np.pi * np.arange(n) / n


def default_threads():
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else min(8, os.cpu_count() or 1)


def _as_kind(kind):
    return InvariantKind.parse(kind) if isinstance(kind, str) else kind


class CurveEvaluator:
    """Measures on ``Z(p, a)`` through the bilinear expansion of the covariant,

        cov(Z) = p cov(phi, phi) + sqrt(p) b [cov(phi, w) + cov(w, phi)] + b^2 cov(w, w),
        b = -exp(i a) sqrt(1 - p),

    which equals evaluating ``superpose`` point by point but builds the
    covariant once for every measure requested.
    """

    def __init__(self, fam):
        cov = COVARIANTS[fam.num_qubits]
        u, v = fam.phi.amplitudes, fam.w.amplitudes
        self.num_qubits = fam.num_qubits
        self.c_uu = cov(u)
        self.c_uv = cov(u, v) + cov(v, u)
        self.c_vv = cov(v)
        self._tail = (None,) * self.c_uu.ndim

    def check(self, kind):
        if kind.num_qubits != self.num_qubits:
            raise QubitCountError(f"{kind.value} needs {kind.num_qubits} qubits, family has {self.num_qubits}")

    def covariant(self, p, phi):
        p = np.asarray(p, dtype=float)
        a = np.sqrt(p)
        b = -np.exp(1j * np.asarray(phi, dtype=float)) * np.sqrt(1.0 - p)
        a, b = np.broadcast_arrays(a, b)
        sl = (...,) + self._tail
        return (a * a)[sl] * self.c_uu + (a * b)[sl] * self.c_uv + (b * b)[sl] * self.c_vv

    def contraction(self, kind, p, phi):
        kind = _as_kind(kind)
        self.check(kind)
        return contraction(kind, self.covariant(p, phi))

    def values_many(self, kinds, p, phi):
        kinds = [_as_kind(k) for k in kinds]
        for k in kinds:
            self.check(k)
        cov = self.covariant(p, phi)
        by_base = {}
        out = {}
        for k in kinds:
            if k.base not in by_base:
                by_base[k.base] = contraction(k.base, cov)
            out[k] = value_from_contraction(k, by_base[k.base])
        return out

    def values(self, kind, p, phi):
        kind = _as_kind(kind)
        return self.values_many([kind], p, phi)[kind]


def characteristic_curves(fam, kinds, p_values=None, phi_values=None, threads=None, chunk=64):
    """Sample every kind in ``kinds`` on ``superpose(fam, p, phi)`` over the outer
    product of the grids; returns ``{kind: CurveGrid}``."""
    kinds = [_as_kind(k) for k in kinds]
    p_values = p_grid() if p_values is None else np.asarray(p_values, dtype=float)
    phi_values = phi_grid() if phi_values is None else np.asarray(phi_values, dtype=float)
    if p_values.size == 0 or phi_values.size == 0:
        raise ValueError("grids must be nonempty")
    if p_values.min() < 0.0 or p_values.max() > 1.0:
        raise RegionError("p grid must lie in [0, 1]")
    ev = CurveEvaluator(fam)
    for k in kinds:
        ev.check(k)
    samples = {k: np.empty((p_values.size, phi_values.size)) for k in kinds}

    def fill(start):
        stop = min(start + chunk, p_values.size)
        vals = ev.values_many(kinds, p_values[start:stop, None], phi_values[None, :])
        for k in kinds:
            samples[k][start:stop] = vals[k]

    starts = range(0, p_values.size, chunk)
    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1:
        for s in starts:
            fill(s)
    else:
        # disjoint row blocks; result independent of scheduling
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, starts))
    return {k: CurveGrid(p_values, phi_values, samples[k]) for k in kinds}


def characteristic_curve(fam, kind, p_values=None, phi_values=None, threads=None):
    kind = _as_kind(kind)
    return characteristic_curves(fam, [kind], p_values, phi_values, threads)[kind]


def min_curve(grid, return_phase_index=False):
    """Pointwise phase-minimum; argmin ties go to the smallest phase index."""
    idx = np.argmin(grid.samples, axis=1)
    vals = grid.samples[np.arange(grid.samples.shape[0]), idx]
    return (vals, idx) if return_phase_index else vals


# -- lower convex envelope ---------------------------------------------------------------

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(points):
    """Vertices of the lower convex hull of 2D points, sorted by x (monotone chain)."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    # keep the lowest y per x
    dedup = []
    for x, y in pts:
        if dedup and dedup[-1][0] == x:
            continue
        dedup.append((x, y))
    hull = []
    for pt in dedup:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0.0:
            hull.pop()
        hull.append(pt)
    return hull


def lower_convex_envelope(p_values, values, extra_points=()):
    """Greatest convex function below the points ``(p_i, v_i)`` (and any extra points),
    sampled back at ``p_values``."""
    p_values = np.asarray(p_values, dtype=float)
    values = np.asarray(values, dtype=float)
    if p_values.shape != values.shape:
        raise ValueError("p_values and values differ in shape")
    if p_values.size < 2:
        raise ValueError("need at least two points for an envelope")
    if np.any(np.diff(p_values) <= 0):
        raise ValueError("p_values must be strictly ascending")
    if not np.all(np.isfinite(values)):
        raise ValueError("values must be finite")
    pts = list(zip(p_values, values)) + [tuple(e) for e in extra_points]
    hull = np.array(lower_hull(pts))
    return np.interp(p_values, hull[:, 0], hull[:, 1])


def _golden_min(f, lo, hi, iters=120):
    """Minimize a unimodal function on [lo, hi] by golden-section search."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if b - a <= 4 * np.finfo(float).eps * max(1.0, abs(a)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def polish_minima(fam, kind, grid, mins=None, arg=None, max_points=16, rounds=3, evaluator=None):
    """Refine interior local minima of the min-curve off the grid.

    The phase-minimum of a characteristic curve can touch zero between grid
    points; for the rooted measures a sample one grid step away is still of
    order step**(1/3) and would lift the envelope visibly. Each interior local
    minimum is re-located by alternating golden-section searches in p and in the
    phase within its neighbouring grid cells. Returns extra ``(p, value)`` points.
    """
    kind = _as_kind(kind)
    if mins is None or arg is None:
        mins, arg = min_curve(grid, return_phase_index=True)
    ev = evaluator or CurveEvaluator(fam)
    P, Q = grid.p_values, grid.phi_values
    n = len(P)
    cand = [i for i in range(1, n - 1) if mins[i] > 0.0 and mins[i] <= mins[i - 1] and mins[i] <= mins[i + 1]]
    cand = sorted(cand, key=lambda i: mins[i])[:max_points]
    dq = (Q[1] - Q[0]) if len(Q) > 1 else np.pi
    extra = []
    for i in cand:
        p, a = P[i], Q[arg[i]]
        # search the unrooted polynomial; roots do not move the minimizer
        for _ in range(rounds):
            p, _v = _golden_min(lambda x: float(np.abs(ev.contraction(kind, x, a))), P[i - 1], P[i + 1])
            a, _v = _golden_min(lambda y: float(np.abs(ev.contraction(kind, p, y))), a - dq, a + dq)
        extra.append((p, float(ev.values(kind, p, a))))
    return extra


@dataclass(frozen=True)
class EnvelopeResult:
    p_values: np.ndarray
    min_curve: np.ndarray = field(repr=False)
    hull_curve: np.ndarray = field(repr=False)
    extra_points: tuple = ()


def envelopes(fam, kinds, p_values=None, phi_values=None, polish=True, threads=None):
    """Lower convex envelope of the phase-minimum of the characteristic curves, per kind.

    The pure endpoints ``(0, measure(w))`` and ``(1, measure(phi))`` are always
    included as hull points. Returns ``({kind: EnvelopeResult}, {kind: CurveGrid})``.
    """
    kinds = [_as_kind(k) for k in kinds]
    grids = characteristic_curves(fam, kinds, p_values, phi_values, threads=threads)
    ev = CurveEvaluator(fam)
    out = {}
    for k in kinds:
        grid = grids[k]
        mins, arg = min_curve(grid, return_phase_index=True)
        extra = [(0.0, measure(k, fam.w)), (1.0, measure(k, fam.phi))]
        if polish:
            extra += polish_minima(fam, k, grid, mins, arg, evaluator=ev)
        hull = lower_convex_envelope(grid.p_values, mins, extra)
        out[k] = EnvelopeResult(grid.p_values, mins, hull, tuple(extra))
    return out, grids


def envelope(fam, kind, p_values=None, phi_values=None, polish=True, threads=None):
    kind = _as_kind(kind)
    return envelopes(fam, [kind], p_values, phi_values, polish, threads)[0][kind]


def case_envelopes(case_ids=None, p_points=DEFAULT_P_POINTS, phi_points=DEFAULT_PHI_POINTS, **kw):
    """Envelopes for several cases, sampling each family's curves only once."""
    cases = [get_case(c) for c in (CASES if case_ids is None else case_ids)]
    groups = {}
    for c in cases:
        groups.setdefault((c.phi_key, c.w_key), []).append(c)
    out = {}
    for members in groups.values():
        kinds = list(dict.fromkeys(c.kind for c in members))
        envs, _ = envelopes(members[0].family, kinds, p_grid(p_points), phi_grid(phi_points), **kw)
        for c in members:
            out[c.id] = envs[c.kind]
    return {c.id: out[c.id] for c in cases}


def case_envelope(case_id, p_points=DEFAULT_P_POINTS, phi_points=DEFAULT_PHI_POINTS, **kw):
    return case_envelopes([case_id], p_points, phi_points, **kw)[get_case(case_id).id]


# -- critical points found from the curves themselves ---------------------------------------

def nontrivial_zero(fam, kind, phase=0.0, n_scan=2001):
    """Interior p where the phase-``phase`` characteristic curve changes sign
    (taken on the real part of its contraction); ``None`` if there is none."""
    kind = _as_kind(kind)
    ev = CurveEvaluator(fam)
    f = lambda p: float(np.real(ev.contraction(kind, p, phase)))
    ps = np.linspace(0.0, 1.0, n_scan)[1:-1]
    vals = np.real(ev.contraction(kind, ps, phase))
    hits = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    if hits.size == 0:
        exact = np.flatnonzero(vals == 0.0)
        return float(ps[exact[0]]) if exact.size else None
    i = hits[0]
    return brentq(f, ps[i], ps[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def tangent_point(fam, kind, lo, hi, phase=0.0, h=1e-6):
    """p in (lo, hi) where the tangent to the phase-``phase`` curve passes through (1, measure(phi))."""
    kind = _as_kind(kind)
    ev = CurveEvaluator(fam)
    c = lambda p: float(ev.values(kind, p, phase))
    top = measure(kind, fam.phi)

    def gap(p):
        slope = (c(p + h) - c(p - h)) / (2.0 * h)
        return c(p) + slope * (1.0 - p) - top

    return brentq(gap, lo, hi, xtol=1e-13)


# -- decompositions ---------------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    terms: tuple
    target: DensityMatrix

    def __post_init__(self):
        terms = tuple((float(w), s) for w, s in self.terms)
        if not 1 <= len(terms) <= 5:
            raise ValueError(f"decomposition has {len(terms)} terms; expected 1..5")
        ws = np.array([w for w, _ in terms])
        if np.any(ws <= 0.0) or np.any(ws > 1.0 + 1e-12):
            raise ValueError("weights must lie in (0, 1]")
        if abs(ws.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {ws.sum():.15g}, not 1")
        object.__setattr__(self, "terms", terms)

    @property
    def weights(self):
        return np.array([w for w, _ in self.terms])

    @property
    def states(self):
        return [s for _, s in self.terms]

    def reconstruct(self):
        dim = self.target.entries.shape[0]
        out = np.zeros((dim, dim), dtype=np.complex128)
        for w, s in self.terms:
            out += w * np.outer(s.amplitudes, s.amplitudes.conj())
        return out


def flatten_terms(terms, tol=1e-12):
    """Drop zero weights and merge states equal up to a global phase."""
    merged = []
    for w, s in terms:
        if w <= tol:
            continue
        for k, (w2, s2) in enumerate(merged):
            if abs(abs(np.vdot(s2.amplitudes, s.amplitudes)) - 1.0) < tol:
                merged[k] = (w2 + w, s2)
                break
        else:
            merged.append((w, s))
    total = sum(w for w, _ in merged)
    return [(w / total, s) for w, s in merged]


def phase_mixture(fam, p, m):
    """Equal-weight terms ``Z(p, 2 pi k / m)``, k = 0..m-1; they average to the mixture at p."""
    return [(1.0 / m, superpose(fam, p, 2.0 * np.pi * k / m)) for k in range(m)]


def _scaled(terms, factor):
    return [(factor * w, s) for w, s in terms]


def decomposition_forms(case_id):
    """Named constructions available for a case, with their p-regions."""
    case = get_case(case_id)
    p0, p1 = case.p0, case.p1
    if case.scheme == "zero":
        return {"spectral": (0.0, 1.0)}
    if case.scheme == "flat":
        return {"phase-mixture": (0.0, 1.0)}
    forms = {"small": (0.0, p0)}
    if case.scheme == "threshold":
        forms["phase-mixture"] = (p0, 1.0)
    elif case.scheme == "ramp":
        forms["ramp"] = (p0, 1.0)
    elif case.scheme == "tangent":
        forms["phase-mixture"] = (p0, p1)
        forms["tangent"] = (p1, 1.0)
    return forms


def build_decomposition(case_id, p, form=None):
    """Optimal pure-state decomposition of the case's mixture at ``p``.

    ``form`` selects a construction by name (see ``decomposition_forms``); by
    default the one whose region contains ``p`` is used.
    """
    case = get_case(case_id)
    if not 0.0 <= p <= 1.0:
        raise RegionError(f"p={p} outside [0, 1]")
    forms = decomposition_forms(case)
    if form is None:
        form = next(name for name, (lo, hi) in forms.items() if lo <= p <= hi)
    elif form not in forms:
        raise RegionError(f"case {case.id} has no construction {form!r}; available: {', '.join(forms)}")
    lo, hi = forms[form]
    if not lo - 1e-15 <= p <= hi + 1e-15:
        raise RegionError(f"construction {form!r} of {case.id} applies for {lo:.6g} <= p <= {hi:.6g}, got p={p}")

    fam = case.family
    m, p0 = case.phases, case.p0
    if form == "spectral":
        terms = [(p, fam.phi), (1.0 - p, fam.w)]
    elif form == "phase-mixture":
        terms = phase_mixture(fam, p, m)
    elif form == "small":
        terms = _scaled(phase_mixture(fam, p0, m), p / p0) + [(1.0 - p / p0, fam.w)]
    elif form == "ramp":
        terms = [((p - p0) / (1.0 - p0), fam.phi)] + _scaled(phase_mixture(fam, p0, m), (1.0 - p) / (1.0 - p0))
    elif form == "tangent":
        p1 = case.p1
        terms = [((p - p1) / (1.0 - p1), fam.phi)] + _scaled(phase_mixture(fam, p1, m), (1.0 - p) / (1.0 - p1))
    else:  # pragma: no cover
        raise RegionError(form)
    return Decomposition(tuple(flatten_terms(terms)), mix(fam, p))


def verify_decomposition(d, kind):
    """``(residual, average)``: max-abs reconstruction error and weighted mean measure."""
    kind = _as_kind(kind)
    residual = float(np.max(np.abs(d.reconstruct() - d.target.entries)))
    avg = float(sum(w * measure(kind, s) for w, s in d.terms))
    return residual, avg


def single_term(s):
    """Trivial decomposition of a pure state."""
    return Decomposition(((1.0, s),), density_of(s))


# -- CSV emission ----------------------------------------------------------------------

def _g12(x):
    return f"{x:.12g}"


def write_curve_csv(grid, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("p,phi,value\n")
        for i, p in enumerate(grid.p_values):
            ps = _g12(p)
            fh.write("".join(f"{ps},{_g12(a)},{_g12(v)}\n" for a, v in zip(grid.phi_values, grid.samples[i])))


def write_envelope_csv(env, reference, path):
    ref = np.asarray(reference(env.p_values), dtype=float)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("p,min,hull,reference\n")
        for row in zip(env.p_values, env.min_curve, env.hull_curve, ref):
            fh.write(",".join(_g12(x) for x in row) + "\n")

