import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tangle_roof.errors import DegenerateStateError, RegionError
from tangle_roof.geometry import (
    BlochVector,
    Tetrahedron,
    bloch_from_span_state,
    contains,
    default_span,
    density_from_bloch,
    zero_tetrahedron,
    zero_witness,
)
from tangle_roof.invariants import measure
from tangle_roof.qstate import catalog_lookup, density_of, mix, superpose
from tangle_roof.roof import P0_F1_RHO2, verify_decomposition

span = default_span()
tet = zero_tetrahedron()


def test_poles():
    assert np.allclose(bloch_from_span_state(density_of(span.phi)).r, [0, 0, 1])
    assert np.allclose(bloch_from_span_state(density_of(span.w)).r, [0, 0, -1])


@given(st.floats(0, 1))
def test_mixture_lies_on_axis(p):
    r = bloch_from_span_state(mix(span, p)).r
    assert np.allclose(r, [0, 0, 2 * p - 1], atol=1e-12)


def test_vertices_are_zero_states():
    for point, s in zip(tet.points, tet.states):
        assert np.allclose(bloch_from_span_state(density_of(s)).r, point, atol=1e-12)
        assert measure("F1", s) < 1e-12
        assert BlochVector(point).is_pure


def test_bloch_round_trip():
    r = np.array([0.1, -0.3, 0.2])
    assert np.allclose(bloch_from_span_state(density_from_bloch(r)).r, r)


def test_state_outside_span_rejected():
    with pytest.raises(DegenerateStateError):
        bloch_from_span_state(density_of(catalog_lookup("phi1").state))


def test_bloch_vector_length():
    with pytest.raises(RegionError):
        BlochVector([1.0, 1.0, 0.0])
    assert not BlochVector([0.0, 0.0, 0.5]).is_pure


def test_degenerate_tetrahedron():
    flat = tuple(BlochVector(p) for p in ([0, 0, 0], [1, 0, 0], [0, 1, 0], [0.5, 0.5, 0]))
    with pytest.raises(DegenerateStateError):
        Tetrahedron(flat)


def test_containment():
    assert contains(tet, [0, 0, 0])
    assert contains(tet, [0, 0, -1])
    assert not contains(tet, [0, 0, 1])
    z = 2 * P0_F1_RHO2 - 1
    assert contains(tet, [0, 0, z])
    assert not contains(tet, [0, 0, z + 1e-6])


def test_north_pole_has_no_witness():
    with pytest.raises(RegionError):
        zero_witness([0, 0, 1])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_witness_for_random_interior_points(seed):
    lam = np.random.default_rng(seed).dirichlet(np.ones(4))
    r = lam @ tet.points
    d = zero_witness(r)
    res, avg = verify_decomposition(d, "F1")
    assert res < 1e-10 and avg < 1e-10
    assert len(d.terms) <= 4


def test_vertex_gives_single_term():
    d = zero_witness([0, 0, -1])
    assert len(d.terms) == 1 and d.weights[0] == 1.0


def test_witness_uses_phase_states():
    d = zero_witness([0, 0, 2 * P0_F1_RHO2 - 1])
    target = superpose(span, P0_F1_RHO2, 0.0)
    assert any(abs(abs(np.vdot(s.amplitudes, target.amplitudes)) - 1) < 1e-12 for s in d.states)
