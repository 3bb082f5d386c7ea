"""Table I, the rho_1 decomposition summary and Table IV, recomputed against their closed forms."""

import itertools
import math

import numpy as np

from .invariants import all_four_qubit, concurrence_mixed
from .qstate import catalog_lookup, family, mix, partial_trace
from .roof import build_decomposition, decomposition_forms, reference_formula, verify_decomposition, get_case

QUBITS = "ABCD"

TABLE_ONE = {
    "phi1": (1.0, 1.0, 0.5),
    "phi2": (8.0 / 9.0, 0.0, 0.0),
    "phi3": (0.0, 0.0, 1.0),
    "w4": (0.0, 0.0, 0.0),
}

ALPHA1 = (math.sqrt(2.0) - 1.0) ** 2
ALPHA2 = 1.0 / 3.0
ALPHA3 = (2.0 - math.sqrt(2.0)) / 2.0


def _theta(x):
    return 1.0 if x >= 0.0 else 0.0


def c_rho1(p):
    return 0.5 * (1.0 - 2.0 * math.sqrt(p) - p) * _theta(ALPHA1 - p)


def c_rho2(p):
    return ((3.0 - p) / 6.0 - math.sqrt(2.0) / 3.0 * math.sqrt(p * (3.0 - p))) * _theta(ALPHA2 - p)


def c_rho3_cross(p):
    """Pairs AC, AD, BC, BD of rho_3."""
    return 0.5 * (1.0 - p - math.sqrt(p * (2.0 - p))) * _theta(ALPHA3 - p)


def c_rho3_cd(p):
    s = math.sqrt(p * (2.0 - p))
    return 0.5 * (1.0 - math.sqrt(p / 2.0) * (math.sqrt(1.0 + s) + math.sqrt(max(1.0 - s, 0.0))))


def pair_formula(j, pair):
    """Closed-form two-qubit concurrence of the ``pair`` marginal of rho_j."""
    if j == 1:
        return c_rho1
    if j == 2:
        return c_rho2
    if pair == (0, 1):
        return c_rho1
    if pair == (2, 3):
        return c_rho3_cd
    return c_rho3_cross


def table_one():
    """Rows ``(key, computed (F1, F2, F3), expected, max deviation)``."""
    rows = []
    for key, expected in TABLE_ONE.items():
        vals = all_four_qubit(catalog_lookup(key).state)
        got = (vals["F1"], vals["F2"], vals["F3"])
        rows.append((key, got, expected, max(abs(a - b) for a, b in zip(got, expected))))
    return rows


def table_four(samples=21):
    """Rows ``(j, pair label, max deviation over the p samples)``."""
    rows = []
    ps = np.linspace(0.0, 1.0, samples)
    for j in (1, 2, 3):
        fam = family(f"phi{j}", "w4")
        rhos = [mix(fam, float(p)) for p in ps]
        for pair in itertools.combinations(range(4), 2):
            ref = pair_formula(j, pair)
            dev = max(abs(concurrence_mixed(partial_trace(rho, pair)) - ref(float(p))) for rho, p in zip(rhos, ps))
            rows.append((j, QUBITS[pair[0]] + QUBITS[pair[1]], dev))
    return rows


TABLE_THREE_CASES = ("F1-rho1", "F2-rho1", "F3-rho1", "G1-rho1", "G2-rho1", "G3-rho1")


def decomposition_check(case_id, samples=11):
    """Rows ``(form, p, residual, average, reference)`` at ``samples`` points per region."""
    case = get_case(case_id)
    ref = reference_formula(case)
    rows = []
    for form, (lo, hi) in decomposition_forms(case).items():
        for p in np.linspace(lo, hi, samples):
            d = build_decomposition(case, float(p), form)
            res, avg = verify_decomposition(d, case.kind)
            rows.append((form, float(p), res, avg, ref(float(p))))
    return rows


def table_three(samples=11):
    """Rows ``(case, max |average - formula|, max residual)`` for the rho_1 summary."""
    out = []
    for cid in TABLE_THREE_CASES:
        rows = decomposition_check(cid, samples)
        out.append((cid, max(abs(r[3] - r[4]) for r in rows), max(r[2] for r in rows)))
    return out
