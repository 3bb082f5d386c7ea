import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tangle_roof.errors import RegionError, UnknownCaseError
from tangle_roof.invariants import InvariantKind, measure
from tangle_roof.qstate import family, superpose
from tangle_roof.roof import (
    CASES,
    P0_GHZW,
    P1_GHZW,
    ZERO_CASES,
    CurveEvaluator,
    CurveGrid,
    Decomposition,
    build_decomposition,
    case_envelope,
    characteristic_curve,
    characteristic_curves,
    decomposition_forms,
    envelope,
    get_case,
    lower_convex_envelope,
    lower_hull,
    min_curve,
    p1_equation,
    p_grid,
    phi_grid,
    reference_formula,
    solve_p1,
    verify_decomposition,
    write_curve_csv,
    write_envelope_csv,
)

K = InvariantKind


def curve_rho1(kind, p, phi):
    e4 = np.exp(4j * phi)
    if kind == "F1":
        return p * np.abs(p**2 - 3 * (1 - p) ** 2 * e4)
    if kind == "F2":
        return p**2 * np.abs(p**2 - 4 * (1 - p) ** 2 * e4)
    return p**6 / 2 + 0 * phi


def test_rho1_curves_closed_form():
    ps, phis = p_grid(51), phi_grid(24)
    fam = family("phi1", "w4")
    grids = characteristic_curves(fam, ["F1", "F2", "F3"], ps, phis)
    P, PHI = np.meshgrid(ps, phis, indexing="ij")
    for kind in ("F1", "F2", "F3"):
        assert np.max(np.abs(grids[K.parse(kind)].samples - curve_rho1(kind, P, PHI))) < 1e-12


def test_ghzw_curve_closed_form():
    ps, phis = p_grid(41), phi_grid(18)
    P, PHI = np.meshgrid(ps, phis, indexing="ij")
    ref = np.abs(P**2 - 8 * np.sqrt(6) / 9 * np.sqrt(P * (1 - P) ** 3) * np.exp(3j * PHI))
    grid = characteristic_curve(family("ghz3", "w3"), "tau3sq", ps, phis)
    assert np.max(np.abs(grid.samples - ref)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted({(c.phi_key, c.w_key) for c in CASES.values()})),
       st.sampled_from(["F1", "F2", "F3", "G1", "G2", "G3", "tau3", "tau3sq"]),
       st.floats(0, 1), st.floats(0, 2 * math.pi))
def test_evaluator_matches_direct(keys, kind, p, phi):
    fam = family(*keys)
    k = K.parse(kind)
    if k.num_qubits != fam.num_qubits:
        return
    fast = CurveEvaluator(fam).values(k, p, phi)
    direct = measure(k, superpose(fam, p, phi))
    assert fast == pytest.approx(direct, abs=1e-11)


def test_threads_do_not_change_results(monkeypatch):
    fam = family("phi2", "w4")
    a = characteristic_curve(fam, "F1", p_grid(101), phi_grid(36), threads=1)
    monkeypatch.setenv("TANGLE_ROOF_THREADS", "3")
    b = characteristic_curve(fam, "F1", p_grid(101), phi_grid(36))
    assert np.array_equal(a.samples, b.samples)


def test_curve_grid_validation():
    with pytest.raises(ValueError):
        CurveGrid(np.zeros(3), np.zeros(2), np.zeros((2, 3)))
    with pytest.raises(ValueError):
        CurveGrid(np.zeros(1), np.zeros(1), np.array([[-1.0]]))


def brute_lower_envelope(xs, ys):
    """Max over all supporting lines through pairs: O(n^3) but plainly correct."""
    out = np.array(ys, dtype=float)
    n = len(xs)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(i + 1, j):
                t = (xs[k] - xs[i]) / (xs[j] - xs[i])
                out[k] = min(out[k], (1 - t) * ys[i] + t * ys[j])
    return out


@settings(max_examples=60)
@given(st.lists(st.floats(-5, 5), min_size=2, max_size=25))
def test_lower_envelope_matches_brute_force(ys):
    xs = np.linspace(0, 1, len(ys))
    hull = lower_convex_envelope(xs, np.array(ys))
    assert np.allclose(hull, brute_lower_envelope(xs, ys), atol=1e-12)


@settings(max_examples=60)
@given(st.lists(st.floats(0, 3), min_size=3, max_size=40))
def test_envelope_convex_and_dominated(ys):
    xs = np.linspace(0, 1, len(ys))
    hull = lower_convex_envelope(xs, np.array(ys))
    assert np.all(hull <= np.array(ys) + 1e-12)
    second = hull[:-2] - 2 * hull[1:-1] + hull[2:]
    assert np.all(second >= -1e-12)


def test_lower_hull_keeps_lowest_duplicate():
    hull = lower_hull([(0, 1), (0, 0), (1, 1), (0.5, 5)])
    assert hull == [(0, 0), (1, 1)]


def test_lower_envelope_extra_points_and_errors():
    xs = np.linspace(0, 1, 5)
    hull = lower_convex_envelope(xs, np.ones(5), extra_points=[(0.5, 0.0)])
    assert hull[2] == 0.0 and hull[0] == 1.0
    with pytest.raises(ValueError):
        lower_convex_envelope([0.0], [1.0])
    with pytest.raises(ValueError):
        lower_convex_envelope([0.0, 1.0, 0.5], [1.0, 1.0, 1.0])


def test_min_curve_phase_index():
    grid = CurveGrid(np.array([0.0, 1.0]), np.array([0.0, 1.0, 2.0]), np.array([[3.0, 1.0, 2.0], [0.0, 5.0, 0.0]]))
    mins, arg = min_curve(grid, return_phase_index=True)
    assert list(mins) == [1.0, 0.0] and list(arg) == [1, 0]


def test_p1_root():
    p1 = solve_p1()
    assert abs(p1_equation(p1)) < 1e-10
    assert p1 == pytest.approx(0.861, abs=1e-3)
    assert P1_GHZW == pytest.approx(0.5 + 3 * math.sqrt(465) / 310)
    assert P0_GHZW == pytest.approx(0.6269, abs=1e-4)


def test_case_registry():
    assert len(CASES) == 20
    assert get_case("f1-RHO1").id == "F1-rho1"
    with pytest.raises(UnknownCaseError):
        get_case("F4-rho1")
    for cid in ZERO_CASES:
        assert reference_formula(cid)(np.linspace(0, 1, 11)).max() == 0.0


@pytest.mark.parametrize("cid", sorted(CASES))
def test_reference_endpoints(cid):
    case = get_case(cid)
    ref = reference_formula(case)
    fam = case.family
    assert ref(0.0) == pytest.approx(measure(case.kind, fam.w), abs=1e-12)
    assert ref(1.0) == pytest.approx(measure(case.kind, fam.phi), abs=1e-12)


@pytest.mark.parametrize("cid", ["F1-rho1", "G2-rho1", "F1-rho2", "tau3-ghzw", "F3-rho2"])
def test_coarse_envelope_tracks_reference(cid):
    env = case_envelope(cid, p_points=201, phi_points=72)
    ref = reference_formula(cid)(env.p_values)
    assert np.max(np.abs(env.hull_curve - ref)) < 5e-3
    assert np.all(env.hull_curve <= env.min_curve + 1e-12)


def test_polish_is_what_closes_the_gap():
    fam = family("phi1", "w4")
    ref = reference_formula("G2-rho1")
    rough = envelope(fam, "G2", p_grid(201), phi_grid(72), polish=False)
    fine = envelope(fam, "G2", p_grid(201), phi_grid(72))
    assert np.max(np.abs(rough.hull_curve - ref(rough.p_values))) > 1e-2
    assert np.max(np.abs(fine.hull_curve - ref(fine.p_values))) < 1e-8


@pytest.mark.parametrize("cid", sorted(CASES))
def test_decompositions_across_regions(cid):
    case = get_case(cid)
    ref = reference_formula(case)
    for form, (lo, hi) in decomposition_forms(case).items():
        for p in np.linspace(lo, hi, 5):
            d = build_decomposition(case, float(p), form)
            res, avg = verify_decomposition(d, case.kind)
            assert res < 1e-10
            assert avg == pytest.approx(ref(float(p)), abs=1e-9)
            assert 1 <= len(d.terms) <= 5


def test_default_form_by_region():
    assert len(build_decomposition("F1-rho2", 0.95).terms) == 4
    assert build_decomposition("F1-rho1", 0.2).states[-1] is not None
    with pytest.raises(RegionError):
        build_decomposition("G3-rho3", 0.3, "ramp")
    with pytest.raises(RegionError):
        build_decomposition("G3-rho3", 0.3, "tangent")
    with pytest.raises(RegionError):
        build_decomposition("G3-rho3", 1.3)


def test_decomposition_validation():
    d = build_decomposition("F1-rho1", 0.5)
    with pytest.raises(ValueError):
        Decomposition(((0.5, d.states[0]),), d.target)
    with pytest.raises(ValueError):
        Decomposition((), d.target)


def test_csv_output_deterministic(tmp_path):
    env = case_envelope("G1-rho1", p_points=51, phi_points=12)
    ref = reference_formula("G1-rho1")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_envelope_csv(env, ref, a)
    write_envelope_csv(case_envelope("G1-rho1", p_points=51, phi_points=12), ref, b)
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_bytes().split(b"\n")
    assert lines[0] == b"p,min,hull,reference" and b"\r" not in a.read_bytes()
    assert len(lines) == 53
    grid = characteristic_curve(family("phi1", "w4"), "F1", p_grid(3), phi_grid(2))
    write_curve_csv(grid, a)
    assert a.read_text().splitlines() == [
        "p,phi,value", "0,0,0", "0,3.14159265359,0", "0.5,0,0.25", "0.5,3.14159265359,0.25", "1,0,1",
        "1,3.14159265359,1",
    ]
