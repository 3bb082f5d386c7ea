import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tangle_roof.jacobi import hermitian_eig, psd_sqrt


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8))
def test_matches_numpy_eigh(seed, n):
    m = random_hermitian(np.random.default_rng(seed), n)
    w, v = hermitian_eig(m)
    assert np.allclose(w, np.linalg.eigvalsh(m)[::-1], atol=1e-11)
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-12)
    assert np.allclose(m @ v, v * w, atol=1e-10)


def test_degenerate_spectrum():
    m = np.array([[0.15, 0, 0, 0], [0, 0.175, 0.175, 0], [0, 0.175, 0.175, 0], [0, 0, 0, 0.5]])
    w, _ = hermitian_eig(m)
    assert np.allclose(w, [0.5, 0.35, 0.15, 0.0], atol=1e-15)


def test_diagonal_input_untouched():
    w, v = hermitian_eig(np.diag([1.0, 3.0, 2.0]))
    assert list(w) == [3.0, 2.0, 1.0]
    assert np.allclose(np.abs(v), np.eye(3)[:, [1, 2, 0]])


def test_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        hermitian_eig(np.ones((2, 3)))


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_psd_sqrt_squares_back(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
    m = a @ a.conj().T  # rank 2, so the clamp path is exercised
    r = psd_sqrt(m)
    assert np.allclose(r @ r, m, atol=1e-10)
    assert np.allclose(r, r.conj().T)


def test_psd_sqrt_rejects_negative():
    with pytest.raises(ValueError):
        psd_sqrt(np.diag([1.0, -0.1]))
